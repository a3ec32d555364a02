//! Region-by-region paste-ability bounds.
//!
//! Suppose A ∩ B is covered by finitely many regions U_1, ..., U_m, and on
//! each region the pair (A ∩ U_i, B ∩ U_i) is paste-able with constant K_i
//! through A ∩ B ∩ U_i. Every cross pair (a, b) then falls into one of two
//! buckets: both ends lie in a common region, where K_i applies with an inner
//! minimum taken over a *smaller* set than the full intersection, or the pair
//! lands in the leftover set
//!
//! ```text
//!     C = (A × B) \ ⋃ᵢ (Uᵢ × Uᵢ)
//! ```
//!
//! on which the routed-over-direct ratio is bounded outright because the
//! direct distances on C stay away from zero on a finite space. Either way
//! the pair's ratio is at most max(K_C, maxᵢ Kᵢ), so the global constant is
//! too. [`global_bound_from_cover`] assembles that bound and checks it
//! against the directly computed constant; the two sides use the same ratio
//! arithmetic, so the inequality is exact, not just within tolerance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pasting::{cross_pair_ratio, lp_constant};
use crate::space::{normalize_indices, FiniteMetricSpace, SubsetPair};

/// A finite family of index regions over a space, meant to cover the
/// intersection of a subset pair.
///
/// Regions are stored sorted and deduplicated. Whether the family actually
/// covers A ∩ B, and meets it region by region, depends on the pair; that is
/// validated by the operations that take both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    regions: Vec<Vec<usize>>,
}

impl Cover {
    /// Build a cover from raw index lists over a space with `n` points.
    /// Every region must be nonempty and in range.
    pub fn new(regions: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        if regions.is_empty() {
            return Err(Error::input("a cover needs at least one region"));
        }
        let regions = regions
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                normalize_indices(&r, n).map_err(|e| Error::input(format!("region {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cover { regions })
    }

    pub fn regions(&self) -> &[Vec<usize>] {
        &self.regions
    }

    /// Whether some single region contains both indices, i.e. whether the
    /// ordered pair (i, j) lies in ⋃ᵢ Uᵢ × Uᵢ.
    pub fn in_common_region(&self, i: usize, j: usize) -> bool {
        self.regions
            .iter()
            .any(|r| r.binary_search(&i).is_ok() && r.binary_search(&j).is_ok())
    }

    /// Check this cover against a pair: every intersection point must lie in
    /// some region, and every region must contain at least one intersection
    /// point (otherwise its inner minimum is over the empty set).
    pub fn validate_for(&self, pair: &SubsetPair) -> Result<()> {
        if pair.is_disjoint() {
            return Err(Error::input(
                "A ∩ B is empty; a cover of the intersection has nothing to cover",
            ));
        }
        for &x in pair.intersection() {
            if !self.regions.iter().any(|r| r.binary_search(&x).is_ok()) {
                return Err(Error::input(format!(
                    "intersection point {x} is not covered by any region"
                )));
            }
        }
        for (i, r) in self.regions.iter().enumerate() {
            if intersect_sorted(r, pair.intersection()).is_empty() {
                return Err(Error::input(format!(
                    "region {i} contains no intersection point, so routing within it is impossible"
                )));
            }
        }
        Ok(())
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// One metric ball per intersection point: region y holds every point of
/// A ∪ B strictly within `radius` of y. Each y covers itself (distance zero),
/// so the result is always a valid cover for the pair.
pub fn ball_cover(space: &FiniteMetricSpace, pair: &SubsetPair, radius: f64) -> Result<Cover> {
    if !(radius > 0.0) {
        return Err(Error::input("ball cover needs a positive radius"));
    }
    if pair.max_index() >= space.n() {
        return Err(Error::input("pair does not fit the space"));
    }
    if pair.is_disjoint() {
        return Err(Error::input(
            "A ∩ B is empty; there are no centres to build balls around",
        ));
    }
    let union = pair.union();
    let regions = pair
        .intersection()
        .iter()
        .map(|&y| {
            union
                .iter()
                .copied()
                .filter(|&i| space.d(i, y) < radius)
                .collect()
        })
        .collect();
    Cover::new(regions, space.n())
}

/// Per-region paste-ability constants: K_i is the largest routed-over-direct
/// ratio among cross pairs a ∈ A ∩ Uᵢ, b ∈ B ∩ Uᵢ with a ≠ b, routed through
/// A ∩ B ∩ Uᵢ only. Regions with no such cross pair get the degenerate
/// constant 1, matching the whole-pair convention.
pub fn local_lp_constants(
    space: &FiniteMetricSpace,
    pair: &SubsetPair,
    cover: &Cover,
) -> Result<Vec<f64>> {
    if pair.max_index() >= space.n() {
        return Err(Error::input("pair does not fit the space"));
    }
    cover.validate_for(pair)?;
    let mut ks = Vec::with_capacity(cover.regions().len());
    for region in cover.regions() {
        let a_in = intersect_sorted(pair.a(), region);
        let b_in = intersect_sorted(pair.b(), region);
        let xs = intersect_sorted(pair.intersection(), region);
        debug_assert!(!xs.is_empty(), "validate_for admits only met regions");
        let mut k = 1.0f64;
        for &a in &a_in {
            for &b in &b_in {
                if a == b {
                    continue;
                }
                if let Some((ratio, _)) = cross_pair_ratio(space, &xs, a, b) {
                    if ratio > k {
                        k = ratio;
                    }
                }
            }
        }
        ks.push(k);
    }
    Ok(ks)
}

/// Largest routed-over-direct ratio over the leftover cross pairs, the ones
/// no single region contains; routing here goes through all of A ∩ B. Zero
/// when the cover leaves no pair behind.
pub fn complement_constant(
    space: &FiniteMetricSpace,
    pair: &SubsetPair,
    cover: &Cover,
) -> Result<f64> {
    Ok(complement_scan(space, pair, cover)?.0)
}

fn complement_scan(
    space: &FiniteMetricSpace,
    pair: &SubsetPair,
    cover: &Cover,
) -> Result<(f64, usize)> {
    if pair.max_index() >= space.n() {
        return Err(Error::input("pair does not fit the space"));
    }
    cover.validate_for(pair)?;
    let xs = pair.intersection();
    let mut k_c = 0.0f64;
    let mut size = 0usize;
    for &a in pair.a() {
        for &b in pair.b() {
            if a == b || cover.in_common_region(a, b) {
                continue;
            }
            size += 1;
            if let Some((ratio, _)) = cross_pair_ratio(space, xs, a, b) {
                if ratio > k_c {
                    k_c = ratio;
                }
            }
        }
    }
    Ok((k_c, size))
}

/// The assembled locality bound next to the directly computed constant.
#[derive(Debug, Clone, Serialize)]
pub struct LocalityReport {
    /// Per-region constants K_i, in region order.
    pub local_ks: Vec<f64>,
    /// Constant over the leftover pair set C; 0 when C is empty.
    pub complement_k: f64,
    /// max(complement_k, maxᵢ Kᵢ): the locality upper bound.
    pub global_bound: f64,
    /// complement_k + maxᵢ Kᵢ: a looser assembly of the same pieces, kept
    /// alongside for comparison.
    pub sum_bound: f64,
    /// The pair's constant computed directly, with no cover involved.
    pub direct_k: f64,
    /// Number of ordered cross pairs (a, b), a ≠ b, in the leftover set C.
    pub complement_size: usize,
    /// direct_k <= global_bound, up to relative tolerance.
    pub verdict: bool,
}

/// Compute every piece of the locality bound and compare it with the direct
/// constant.
///
/// The inequality direct_k <= global_bound holds exactly, not merely within
/// tolerance: a leftover pair's ratio appears in complement_k verbatim, and a
/// covered pair's ratio only grows when its inner minimum is restricted to
/// the region (fewer routing choices can never make the route cheaper). The
/// trivial cover (one region holding all of A ∪ B) turns the bound into the
/// direct constant itself.
pub fn global_bound_from_cover(
    space: &FiniteMetricSpace,
    pair: &SubsetPair,
    cover: &Cover,
    tol: f64,
) -> Result<LocalityReport> {
    let local_ks = local_lp_constants(space, pair, cover)?;
    let (complement_k, complement_size) = complement_scan(space, pair, cover)?;
    let max_local = local_ks.iter().copied().fold(0.0f64, f64::max);
    let global_bound = complement_k.max(max_local);
    let sum_bound = complement_k + max_local;
    let direct_k = lp_constant(space, pair)?
        .k
        .expect("validate_for rejected disjoint pairs");
    let verdict = direct_k <= global_bound + tol * global_bound.max(1.0);
    Ok(LocalityReport {
        local_ks,
        complement_k,
        global_bound,
        sum_bound,
        direct_k,
        complement_size,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{default_labels, random_metric, DEFAULT_TOL};

    fn unit_triangle() -> FiniteMetricSpace {
        FiniteMetricSpace::new(
            default_labels(3),
            vec![
                vec![0.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
        )
        .unwrap()
    }

    fn split_pair() -> SubsetPair {
        SubsetPair::new(vec![0, 2], vec![1, 2], 3).unwrap()
    }

    #[test]
    fn trivial_cover_reproduces_the_direct_constant_exactly() {
        let s = unit_triangle();
        let pair = split_pair();
        let cover = Cover::new(vec![vec![0, 1, 2]], 3).unwrap();
        let rep = global_bound_from_cover(&s, &pair, &cover, DEFAULT_TOL).unwrap();
        assert_eq!(rep.local_ks, vec![2.0]);
        assert_eq!(rep.complement_k, 0.0);
        assert_eq!(rep.complement_size, 0);
        assert_eq!(rep.direct_k, 2.0);
        assert_eq!(
            rep.global_bound, rep.direct_k,
            "same pairs, same arithmetic"
        );
        assert_eq!(rep.sum_bound, rep.direct_k);
        assert!(rep.verdict);
    }

    #[test]
    fn partial_cover_pushes_the_witness_pair_into_the_complement() {
        let s = unit_triangle();
        let pair = split_pair();
        // The single region {0, 2} covers the intersection point 2 but not
        // the worst pair (0, 1), which must surface in the complement.
        let cover = Cover::new(vec![vec![0, 2]], 3).unwrap();
        let rep = global_bound_from_cover(&s, &pair, &cover, DEFAULT_TOL).unwrap();
        assert_eq!(rep.local_ks, vec![1.0]);
        assert_eq!(rep.complement_k, 2.0);
        assert_eq!(rep.complement_size, 2, "(0,1) and (2,1) are uncovered");
        assert_eq!(rep.global_bound, 2.0);
        assert_eq!(rep.sum_bound, 3.0);
        assert!(rep.verdict);
    }

    #[test]
    fn region_missing_the_intersection_is_an_input_error() {
        let s = unit_triangle();
        let pair = split_pair();
        let cover = Cover::new(vec![vec![0, 1], vec![2]], 3).unwrap();
        let err = local_lp_constants(&s, &pair, &cover).unwrap_err();
        assert!(err.to_string().contains("region 0"), "{err}");
    }

    #[test]
    fn uncovered_intersection_point_is_an_input_error() {
        let s = random_metric(6, 9).unwrap();
        let pair = SubsetPair::new(vec![0, 1, 2, 3], vec![2, 3, 4, 5], 6).unwrap();
        let cover = Cover::new(vec![vec![1, 2]], 6).unwrap();
        let err = global_bound_from_cover(&s, &pair, &cover, DEFAULT_TOL).unwrap_err();
        assert!(err.to_string().contains("not covered"), "{err}");
    }

    #[test]
    fn cover_over_a_disjoint_pair_is_an_input_error() {
        let s = random_metric(4, 2).unwrap();
        let pair = SubsetPair::new(vec![0, 1], vec![2, 3], 4).unwrap();
        let cover = Cover::new(vec![vec![0, 1, 2, 3]], 4).unwrap();
        assert!(local_lp_constants(&s, &pair, &cover).is_err());
    }

    #[test]
    fn ball_cover_with_huge_radius_gives_full_regions() {
        let s = unit_triangle();
        let pair = split_pair();
        let cover = ball_cover(&s, &pair, 10.0).unwrap();
        assert_eq!(cover.regions(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn ball_cover_with_tiny_radius_gives_singleton_regions() {
        let s = unit_triangle();
        let pair = split_pair();
        let cover = ball_cover(&s, &pair, 0.5).unwrap();
        assert_eq!(cover.regions(), &[vec![2]]);
        // Still a valid cover: the complement carries the whole load.
        let rep = global_bound_from_cover(&s, &pair, &cover, DEFAULT_TOL).unwrap();
        assert_eq!(rep.local_ks, vec![1.0]);
        assert_eq!(rep.complement_k, 2.0);
        assert_eq!(rep.global_bound, 2.0);
        assert!(rep.verdict);
    }

    #[test]
    fn ball_cover_rejects_nonpositive_radius() {
        let s = unit_triangle();
        let pair = split_pair();
        assert!(ball_cover(&s, &pair, 0.0).is_err());
        assert!(ball_cover(&s, &pair, -1.0).is_err());
    }

    #[test]
    fn direct_constant_never_exceeds_the_bound_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for trial in 0..40u64 {
            let n = rng.random_range(5..=12);
            let s = random_metric(n, trial).unwrap();
            let cut = rng.random_range(1..n - 1);
            let a: Vec<usize> = (0..=cut).collect();
            let b: Vec<usize> = (cut..n).collect();
            let pair = SubsetPair::new(a, b, n).unwrap();
            // Random regions, then one extra region guaranteeing coverage.
            let mut regions: Vec<Vec<usize>> = (0..rng.random_range(1..4))
                .map(|_| {
                    (0..n)
                        .filter(|_| rng.random_range(0..3u8) > 0)
                        .collect::<Vec<_>>()
                })
                .filter(|r: &Vec<usize>| {
                    !r.is_empty() && r.iter().any(|i| pair.intersection().contains(i))
                })
                .collect();
            regions.push(pair.union());
            let cover = Cover::new(regions, n).unwrap();
            let rep = global_bound_from_cover(&s, &pair, &cover, DEFAULT_TOL).unwrap();
            assert!(
                rep.direct_k <= rep.global_bound,
                "trial {trial}: direct {} over bound {}",
                rep.direct_k,
                rep.global_bound
            );
            assert!(rep.global_bound <= rep.sum_bound);
            assert!(rep.verdict);
        }
    }

    #[test]
    fn fewer_routing_points_never_cheapen_a_fixed_pairs_route() {
        // Per-pair monotonicity, the engine behind the locality bound: when a
        // region offers only a subset of the intersection to route through,
        // the surviving pair's ratio can only grow. Compare each uncovered
        // leftover ratio (full intersection) against the same pair's ratio
        // inside a shrunken region.
        let s = random_metric(10, 77).unwrap();
        let pair = SubsetPair::new(vec![0, 1, 2, 3, 4, 5], vec![4, 5, 6, 7, 8, 9], 10).unwrap();
        let full_ratio = crate::pasting::cross_ratio(&s, &pair, 0, 9).unwrap();
        for &x in pair.intersection() {
            let through_one = (s.d(0, x) + s.d(x, 9)) / s.d(0, 9);
            assert!(
                through_one >= full_ratio,
                "routing only through {x} came out cheaper than the full minimum"
            );
        }
    }
}
