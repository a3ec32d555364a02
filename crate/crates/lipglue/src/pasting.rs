//! Paste-ability constants and glued metrics.
//!
//! A pair of subsets A, B is "paste-able with constant k" when every cross
//! pair a ∈ A, b ∈ B can be routed through the intersection at a cost of at
//! most k times the direct distance:
//!
//! ```text
//!     min over x in A ∩ B of  d(a,x) + d(x,b)   <=   k * d(a,b)
//! ```
//!
//! [`lp_constant`] computes the smallest such k exactly (a maximum of finitely
//! many ratios). Its significance: a function that is Lipschitz on A and on B
//! separately is Lipschitz on A ∪ B with constant at most max(L0 * k, L0),
//! and k is sharp for that conclusion. The sharpness direction is concrete
//! here too: [`glued_metric`] builds the metric delta that routes every cross
//! pair through the intersection, and [`converse_witness`] exhibits the
//! identity map into it as a function whose pieces have Lipschitz constant 1
//! while the whole map has exactly k.

use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lipschitz::{lipschitz_constant, restrict_function, MappedFunction};
use crate::space::{restrict, verify_metric, FiniteMetricSpace, SubsetPair};

/// Outcome of a paste-ability computation.
///
/// `k` is absent exactly when the pair is disjoint; a disjoint pair is still
/// paste-able (any Lipschitz pieces combine, with a constant controlled by the
/// separation instead), so `lp` stays true and `separation` reports the
/// smallest cross distance. Witnesses are the lexicographically smallest
/// attaining cross pair and the smallest intersection point attaining its
/// inner minimum; they are absent when no cross pair with a ≠ b exists.
#[derive(Debug, Clone, PartialEq)]
pub struct LpReport {
    pub k: Option<f64>,
    pub lp: bool,
    pub disjoint: bool,
    pub separation: Option<f64>,
    pub witness_pair: Option<(usize, usize)>,
    pub witness_x: Option<usize>,
}

impl Serialize for LpReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let fields = if self.separation.is_some() { 6 } else { 5 };
        let mut st = serializer.serialize_struct("LpReport", fields)?;
        // k is a number when it exists and the string "undefined" for
        // disjoint pairs, so downstream tooling never confuses "no constant"
        // with "constant zero".
        match self.k {
            Some(v) => st.serialize_field("k", &v)?,
            None => st.serialize_field("k", "undefined")?,
        }
        st.serialize_field("lp", &self.lp)?;
        st.serialize_field("disjoint", &self.disjoint)?;
        if let Some(sep) = self.separation {
            st.serialize_field("separation", &sep)?;
        }
        st.serialize_field("witness_pair", &self.witness_pair)?;
        st.serialize_field("witness_x", &self.witness_x)?;
        st.end()
    }
}

/// Cheapest route from `a` to `b` through the intersection: the minimum of
/// d(a,x) + d(x,b) over `xs`, together with the smallest attaining x.
///
/// Every paste-ability number in the crate funnels through this one loop, so
/// equal inputs give bitwise-equal results everywhere.
#[inline]
pub(crate) fn through_min(
    space: &FiniteMetricSpace,
    xs: &[usize],
    a: usize,
    b: usize,
) -> (f64, usize) {
    debug_assert!(!xs.is_empty());
    let mut best = f64::INFINITY;
    let mut arg = xs[0];
    for &x in xs {
        let via = space.d(a, x) + space.d(x, b);
        if via < best {
            best = via;
            arg = x;
        }
    }
    (best, arg)
}

/// One cross ratio [min over x of d(a,x)+d(x,b)] / d(a,b); infinite when the
/// pair sits at distance zero yet cannot be routed for free.
#[inline]
pub(crate) fn cross_pair_ratio(
    space: &FiniteMetricSpace,
    xs: &[usize],
    a: usize,
    b: usize,
) -> Option<(f64, usize)> {
    let (inner, x) = through_min(space, xs, a, b);
    let den = space.d(a, b);
    if den == 0.0 {
        if inner == 0.0 {
            return None; // degenerate duplicate pair, nothing to measure
        }
        return Some((f64::INFINITY, x));
    }
    Some((inner / den, x))
}

/// Exact paste-ability constant of a pair: the largest cross ratio, or the
/// separation report for disjoint pairs.
///
/// For a valid metric, k >= 1 whenever a cross pair exists (the triangle
/// inequality bounds every ratio from below), A = B forces k = 1 (x = a
/// attains the inner minimum), and the degenerate single-shared-point pair
/// with no cross pair gets k = 1 by convention.
pub fn lp_constant(space: &FiniteMetricSpace, pair: &SubsetPair) -> Result<LpReport> {
    if pair.max_index() >= space.n() {
        return Err(Error::input(format!(
            "pair mentions index {} but the space has {} points",
            pair.max_index(),
            space.n()
        )));
    }

    if pair.is_disjoint() {
        let mut sep = f64::INFINITY;
        for &a in pair.a() {
            for &b in pair.b() {
                sep = sep.min(space.d(a, b));
            }
        }
        return Ok(LpReport {
            k: None,
            lp: true,
            disjoint: true,
            separation: Some(sep),
            witness_pair: None,
            witness_x: None,
        });
    }

    let xs = pair.intersection();
    let mut best: Option<f64> = None;
    let mut witness_pair = None;
    let mut witness_x = None;
    for &a in pair.a() {
        for &b in pair.b() {
            if a == b {
                continue;
            }
            if let Some((ratio, x)) = cross_pair_ratio(space, xs, a, b) {
                if best.is_none_or(|cur| ratio > cur) {
                    best = Some(ratio);
                    witness_pair = Some((a, b));
                    witness_x = Some(x);
                }
            }
        }
    }

    match best {
        Some(k) => Ok(LpReport {
            k: Some(k),
            lp: true,
            disjoint: false,
            separation: None,
            witness_pair,
            witness_x,
        }),
        // No cross pair with a != b: A = B = one shared point. Vacuously
        // paste-able with k = 1.
        None => Ok(LpReport {
            k: Some(1.0),
            lp: true,
            disjoint: false,
            separation: None,
            witness_pair: None,
            witness_x: None,
        }),
    }
}

/// The routed-over-direct ratio for one specific cross pair.
pub fn cross_ratio(
    space: &FiniteMetricSpace,
    pair: &SubsetPair,
    a: usize,
    b: usize,
) -> Result<f64> {
    if pair.max_index() >= space.n() {
        return Err(Error::input("pair does not fit the space"));
    }
    if pair.is_disjoint() {
        return Err(Error::input(
            "A ∩ B is empty, so there is no route through the intersection",
        ));
    }
    if a == b {
        return Err(Error::input("cross ratio needs two distinct points"));
    }
    if pair.a().binary_search(&a).is_err() {
        return Err(Error::input(format!("point {a} is not in A")));
    }
    if pair.b().binary_search(&b).is_err() {
        return Err(Error::input(format!("point {b} is not in B")));
    }
    match cross_pair_ratio(space, pair.intersection(), a, b) {
        Some((ratio, _)) => Ok(ratio),
        None => Err(Error::input(format!(
            "points {a} and {b} sit at distance zero; the input is not a metric"
        ))),
    }
}

/// A space glued along a subset pair: the original distances `base` on
/// A ∪ B next to the glued matrix `delta` that routes every cross pair
/// through the intersection.
///
/// `union_indices` maps positions back to indices of the original space, and
/// `pair` is the input pair re-expressed in those positions.
#[derive(Debug, Clone)]
pub struct GluedMetricSpace {
    pub base: Arc<FiniteMetricSpace>,
    pub delta: Arc<FiniteMetricSpace>,
    pub union_indices: Vec<usize>,
    pub pair: SubsetPair,
}

/// Build the glued metric on A ∪ B:
///
/// ```text
///     delta(x1, x2) = d(x1, x2)                        if x1, x2 both in A
///                                                      or both in B,
///     delta(x1, x2) = min over x in A ∩ B of
///                       d(x1, x) + d(x, x2)            otherwise.
/// ```
///
/// The result is checked against the metric axioms before it is returned;
/// a failure means the *input* matrix was not a metric on A ∪ B, and comes
/// back as [`Error::NotAMetric`]. By construction delta agrees with d inside
/// A and inside B and dominates d everywhere (each route obeys the triangle
/// inequality), which is what makes the converse construction tick.
pub fn glued_metric(
    space: &FiniteMetricSpace,
    pair: &SubsetPair,
    tol: f64,
) -> Result<GluedMetricSpace> {
    if pair.max_index() >= space.n() {
        return Err(Error::input("pair does not fit the space"));
    }
    if pair.is_disjoint() {
        return Err(Error::input(
            "A ∩ B is empty; there is nothing to glue through",
        ));
    }
    let (union, upair) = pair.reindex_to_union();
    let base = restrict(space, &union)?;
    let m = base.n();

    let mut in_a = vec![false; m];
    let mut in_b = vec![false; m];
    for &i in upair.a() {
        in_a[i] = true;
    }
    for &i in upair.b() {
        in_b[i] = true;
    }

    let xs = upair.intersection();
    let mut delta = vec![0.0f64; m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            let same_side = (in_a[i] && in_a[j]) || (in_b[i] && in_b[j]);
            let v = if same_side {
                base.d(i, j)
            } else {
                through_min(&base, xs, i, j).0
            };
            delta[i * m + j] = v;
            delta[j * m + i] = v;
        }
    }
    let delta = FiniteMetricSpace::from_flat(base.labels().to_vec(), delta, m);

    let violations = verify_metric(&delta, tol);
    if !violations.is_empty() {
        return Err(Error::NotAMetric { violations });
    }

    Ok(GluedMetricSpace {
        base: Arc::new(base),
        delta: Arc::new(delta),
        union_indices: union,
        pair: upair,
    })
}

/// The sharpness certificate for the pasting constant.
#[derive(Debug, Clone, Serialize)]
pub struct ConverseReport {
    /// Lipschitz constant of the identity restricted to A (1 for |A| >= 2,
    /// degenerate 0 for a singleton).
    pub lip_a: f64,
    /// Same for B.
    pub lip_b: f64,
    /// Lipschitz constant of the identity (A ∪ B, d) -> (A ∪ B, delta).
    pub lip_id: f64,
    /// Paste-ability constant of the pair, computed independently.
    pub k: f64,
    /// lip_id equals k (within tolerance) and neither restriction exceeds 1.
    pub verdict: bool,
}

/// Exhibit the identity map into the glued metric as the function that makes
/// the pasting constant sharp: its restrictions to A and B are isometries,
/// yet its global Lipschitz constant is exactly k.
///
/// `lip_id` and `k` are produced by independent code paths (a Lipschitz scan
/// over the glued matrix vs. the cross-ratio maximum); on the same input they
/// agree to the last bit because both reduce to the same through-the-
/// intersection minima.
pub fn converse_witness(
    space: &FiniteMetricSpace,
    pair: &SubsetPair,
    tol: f64,
) -> Result<ConverseReport> {
    let glued = glued_metric(space, pair, tol)?;
    let m = glued.base.n();
    if m < 2 {
        return Err(Error::input(
            "A ∪ B is a single point; there is no cross pair to witness",
        ));
    }
    let id = MappedFunction::new(glued.base.clone(), glued.delta.clone(), (0..m).collect())?;
    let lip_id = lipschitz_constant(&id).value;
    let lip_a = lipschitz_constant(&restrict_function(&id, glued.pair.a())?).value;
    let lip_b = lipschitz_constant(&restrict_function(&id, glued.pair.b())?).value;
    let k = lp_constant(space, pair)?
        .k
        .expect("intersection is nonempty, k exists");
    let verdict =
        (lip_id - k).abs() <= tol * k.max(1.0) && lip_a <= 1.0 + tol && lip_b <= 1.0 + tol;
    Ok(ConverseReport {
        lip_a,
        lip_b,
        lip_id,
        k,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{default_labels, random_metric, DEFAULT_TOL};

    fn unit_triangle() -> FiniteMetricSpace {
        FiniteMetricSpace::new(
            vec!["p".into(), "q".into(), "r".into()],
            vec![
                vec![0.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn equilateral_triangle_split_has_k_two() {
        // A = {p, r}, B = {q, r}: the only detour for (p, q) runs through r
        // at cost 2 against a direct distance of 1.
        let s = unit_triangle();
        let pair = SubsetPair::new(vec![0, 2], vec![1, 2], 3).unwrap();
        let rep = lp_constant(&s, &pair).unwrap();
        assert_eq!(rep.k, Some(2.0));
        assert_eq!(rep.witness_pair, Some((0, 1)));
        assert_eq!(rep.witness_x, Some(2));
        assert!(rep.lp && !rep.disjoint);
        assert!(rep.separation.is_none());
    }

    #[test]
    fn equal_subsets_have_k_exactly_one() {
        let s = random_metric(7, 21).unwrap();
        let all: Vec<usize> = (0..7).collect();
        let pair = SubsetPair::new(all.clone(), all, 7).unwrap();
        let rep = lp_constant(&s, &pair).unwrap();
        // x = a routes any pair for free, so every ratio is exactly 1.0.
        assert_eq!(rep.k, Some(1.0));
    }

    #[test]
    fn nested_subsets_have_k_one() {
        let s = random_metric(8, 4).unwrap();
        let pair = SubsetPair::new(vec![1, 3, 5], (0..8).collect(), 8).unwrap();
        assert_eq!(lp_constant(&s, &pair).unwrap().k, Some(1.0));
        let flipped = SubsetPair::new((0..8).collect(), vec![1, 3, 5], 8).unwrap();
        assert_eq!(lp_constant(&s, &flipped).unwrap().k, Some(1.0));
    }

    #[test]
    fn k_is_symmetric_in_the_two_subsets() {
        for seed in 0..10 {
            let s = random_metric(9, seed).unwrap();
            let pair = SubsetPair::new(vec![0, 1, 2, 3, 4], vec![3, 4, 5, 6, 7], 9).unwrap();
            let flipped = SubsetPair::new(vec![3, 4, 5, 6, 7], vec![0, 1, 2, 3, 4], 9).unwrap();
            let ka = lp_constant(&s, &pair).unwrap().k.unwrap();
            let kb = lp_constant(&s, &flipped).unwrap().k.unwrap();
            assert_eq!(
                ka, kb,
                "seed {seed}: k must not depend on the order of A and B"
            );
        }
    }

    #[test]
    fn k_is_invariant_under_rescaling() {
        let s = random_metric(8, 31).unwrap();
        let pair = SubsetPair::new(vec![0, 2, 4, 6], vec![1, 2, 3, 4], 8).unwrap();
        let k = lp_constant(&s, &pair).unwrap().k.unwrap();
        let scale = |c: f64| {
            FiniteMetricSpace::new(
                s.labels().to_vec(),
                s.rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(|v| v * c).collect())
                    .collect(),
            )
            .unwrap()
        };
        // Power-of-two scaling is exact in floating point.
        let k2 = lp_constant(&scale(4.0), &pair).unwrap().k.unwrap();
        assert_eq!(k, k2);
        // Arbitrary scaling agrees to relative 1e-12.
        let k3 = lp_constant(&scale(0.37), &pair).unwrap().k.unwrap();
        assert!((k - k3).abs() <= 1e-12 * k);
    }

    #[test]
    fn disjoint_pair_reports_separation_instead_of_k() {
        let s = unit_triangle();
        let pair = SubsetPair::new(vec![0], vec![1], 3).unwrap();
        let rep = lp_constant(&s, &pair).unwrap();
        assert_eq!(rep.k, None);
        assert!(rep.disjoint && rep.lp);
        assert_eq!(rep.separation, Some(1.0));
        assert!(rep.witness_pair.is_none() && rep.witness_x.is_none());
    }

    #[test]
    fn single_shared_point_pair_is_vacuously_k_one() {
        let s = unit_triangle();
        let pair = SubsetPair::new(vec![2], vec![2], 3).unwrap();
        let rep = lp_constant(&s, &pair).unwrap();
        assert_eq!(rep.k, Some(1.0));
        assert!(rep.witness_pair.is_none());
    }

    #[test]
    fn cross_ratio_matches_the_definition_and_validates_membership() {
        let s = unit_triangle();
        let pair = SubsetPair::new(vec![0, 2], vec![1, 2], 3).unwrap();
        assert_eq!(cross_ratio(&s, &pair, 0, 1).unwrap(), 2.0);
        assert_eq!(cross_ratio(&s, &pair, 2, 1).unwrap(), 1.0);
        assert!(cross_ratio(&s, &pair, 1, 1).is_err(), "a == b");
        assert!(cross_ratio(&s, &pair, 1, 0).is_err(), "1 is not in A");
    }

    #[test]
    fn glued_triangle_doubles_exactly_the_cross_distance() {
        let s = unit_triangle();
        let pair = SubsetPair::new(vec![0, 2], vec![1, 2], 3).unwrap();
        let g = glued_metric(&s, &pair, DEFAULT_TOL).unwrap();
        assert_eq!(g.delta.d(0, 1), 2.0);
        assert_eq!(g.delta.d(0, 2), 1.0);
        assert_eq!(g.delta.d(1, 2), 1.0);
        assert_eq!(g.union_indices, vec![0, 1, 2]);
        // delta passed the axiom check inside glued_metric already; spot
        // check domination anyway.
        for i in 0..3 {
            for j in 0..3 {
                assert!(g.delta.d(i, j) >= g.base.d(i, j));
            }
        }
    }

    #[test]
    fn glueing_a_disjoint_pair_is_an_input_error() {
        let s = unit_triangle();
        let pair = SubsetPair::new(vec![0], vec![1], 3).unwrap();
        assert!(matches!(
            glued_metric(&s, &pair, DEFAULT_TOL),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn glueing_a_non_metric_reports_not_a_metric() {
        let s = FiniteMetricSpace::new(
            default_labels(3),
            vec![
                vec![0.0, 5.0, 1.0],
                vec![5.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
        )
        .unwrap();
        // Glue along the good edge pair; the broken 0-1 edge survives into
        // delta inside A, which cannot satisfy the triangle inequality.
        let pair = SubsetPair::new(vec![0, 1, 2], vec![2], 3).unwrap();
        assert!(matches!(
            glued_metric(&s, &pair, DEFAULT_TOL),
            Err(Error::NotAMetric { .. })
        ));
    }

    #[test]
    fn converse_identity_attains_k_exactly() {
        let s = unit_triangle();
        let pair = SubsetPair::new(vec![0, 2], vec![1, 2], 3).unwrap();
        let rep = converse_witness(&s, &pair, DEFAULT_TOL).unwrap();
        assert_eq!(rep.lip_a, 1.0);
        assert_eq!(rep.lip_b, 1.0);
        assert_eq!(rep.k, 2.0);
        assert_eq!(
            rep.lip_id, 2.0,
            "identity into delta must attain k, bit for bit"
        );
        assert!(rep.verdict);
    }

    #[test]
    fn converse_matches_k_bitwise_on_random_spaces() {
        for seed in 0..25 {
            let s = random_metric(10, 100 + seed).unwrap();
            let pair = SubsetPair::new(vec![0, 1, 2, 3, 4, 5], vec![4, 5, 6, 7, 8, 9], 10).unwrap();
            let rep = converse_witness(&s, &pair, DEFAULT_TOL).unwrap();
            assert_eq!(rep.lip_id, rep.k, "seed {seed}: independent paths disagree");
            assert!(rep.verdict);
        }
    }

    #[test]
    fn delta_dominates_d_entrywise() {
        for seed in 0..10 {
            let s = random_metric(9, 500 + seed).unwrap();
            let pair = SubsetPair::new(vec![0, 1, 2, 3], vec![3, 4, 5, 6], 9).unwrap();
            let g = glued_metric(&s, &pair, DEFAULT_TOL).unwrap();
            let m = g.base.n();
            for i in 0..m {
                for j in 0..m {
                    assert!(
                        g.delta.d(i, j) >= g.base.d(i, j),
                        "seed {seed}: delta({i},{j}) fell below d"
                    );
                }
            }
        }
    }

    #[test]
    fn converse_on_a_single_shared_point_is_an_input_error() {
        let s = unit_triangle();
        let pair = SubsetPair::new(vec![2], vec![2], 3).unwrap();
        assert!(converse_witness(&s, &pair, DEFAULT_TOL).is_err());
    }

    #[test]
    fn lp_rejects_pairs_that_do_not_fit_the_space() {
        let s = unit_triangle();
        let pair = SubsetPair::new(vec![0, 4], vec![1], 5).unwrap();
        assert!(lp_constant(&s, &pair).is_err());
    }
}
