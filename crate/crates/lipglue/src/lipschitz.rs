//! Lipschitz constants of maps between finite metric spaces.
//!
//! For f: X -> Y the Lipschitz constant is the largest ratio
//! delta(f(x1), f(x2)) / d(x1, x2) over distinct points of X. On finite
//! spaces the supremum is a maximum over pairs, so we compute it exactly and
//! return the pair that attains it.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pasting::LpReport;
use crate::space::{normalize_indices, restrict, FiniteMetricSpace, SubsetPair};

/// A map between two finite metric spaces, given pointwise: `assignment[i]`
/// is the codomain index that domain point `i` lands on.
///
/// Spaces are held behind `Arc` so that restrictions and identity maps can
/// share them without copying matrices.
#[derive(Debug, Clone)]
pub struct MappedFunction {
    domain: Arc<FiniteMetricSpace>,
    codomain: Arc<FiniteMetricSpace>,
    assignment: Vec<usize>,
}

impl MappedFunction {
    pub fn new(
        domain: Arc<FiniteMetricSpace>,
        codomain: Arc<FiniteMetricSpace>,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        if assignment.len() != domain.n() {
            return Err(Error::input(format!(
                "assignment has {} entries for a domain with {} points",
                assignment.len(),
                domain.n()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&y| y >= codomain.n()) {
            return Err(Error::input(format!(
                "assignment targets point {bad}, but the codomain has {} points",
                codomain.n()
            )));
        }
        Ok(MappedFunction {
            domain,
            codomain,
            assignment,
        })
    }

    pub fn domain(&self) -> &FiniteMetricSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteMetricSpace {
        &self.codomain
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Image distance between f(i) and f(j).
    #[inline]
    pub fn image_d(&self, i: usize, j: usize) -> f64 {
        self.codomain.d(self.assignment[i], self.assignment[j])
    }

    /// Diameter of the image of f inside the codomain.
    pub fn image_diameter(&self) -> f64 {
        let n = self.domain.n();
        let mut diam: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                diam = diam.max(self.image_d(i, j));
            }
        }
        diam
    }
}

/// The exact Lipschitz constant and, when it is positive, the
/// lexicographically smallest pair attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzReport {
    pub value: f64,
    pub witness: Option<(usize, usize)>,
}

/// Maximum of delta(f(i), f(j)) / d(i, j) over unordered pairs i < j.
///
/// A one-point domain or a constant map gives value 0 with no witness. Pairs
/// at distance zero (which a valid metric does not have) are skipped when the
/// image distance is also zero and otherwise report an infinite constant.
pub fn lipschitz_constant(f: &MappedFunction) -> LipschitzReport {
    let n = f.domain().n();
    let mut best = 0.0f64;
    let mut witness = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let num = f.image_d(i, j);
            let den = f.domain().d(i, j);
            let ratio = if den == 0.0 {
                if num == 0.0 {
                    continue;
                }
                f64::INFINITY
            } else {
                num / den
            };
            // Strict improvement only: the first pair in scan order that
            // reaches the final maximum is the lexicographically smallest.
            if ratio > best {
                best = ratio;
                witness = Some((i, j));
            }
        }
    }
    LipschitzReport {
        value: best,
        witness,
    }
}

/// f restricted to a subset of its domain: the domain shrinks to the
/// subspace on `indices` (sorted, deduplicated), the codomain is unchanged.
pub fn restrict_function(f: &MappedFunction, indices: &[usize]) -> Result<MappedFunction> {
    let idx = normalize_indices(indices, f.domain().n())?;
    let domain = restrict(f.domain(), &idx)?;
    let assignment = idx.iter().map(|&i| f.assignment[i]).collect();
    MappedFunction::new(Arc::new(domain), f.codomain.clone(), assignment)
}

/// Everything the pasting inequality says about one function, computed from
/// both ends so the two sides can be compared honestly.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheckReport {
    /// Lip of f restricted to A.
    pub lip_a: f64,
    /// Lip of f restricted to B.
    pub lip_b: f64,
    /// max(lip_a, lip_b).
    pub l0: f64,
    /// Paste-ability constant of the pair, from the supplied report.
    pub k: f64,
    /// l0 * k.
    pub l: f64,
    /// Lipschitz constant of f on all of A ∪ B, measured directly.
    pub lip_f: f64,
    /// max(l, l0): what the pasting inequality promises.
    pub bound: f64,
    /// lip_f <= bound, up to relative tolerance.
    pub verdict: bool,
    /// Whether lip_f actually reaches the bound (equality case).
    pub tight: bool,
}

/// Check the pasting inequality Lip(f) <= max(l0 * k, l0) for a function
/// defined on exactly A ∪ B.
///
/// `pair` must be expressed in the coordinates of f's domain and cover it
/// entirely (restrict f to A ∪ B first if it is defined on more), and `lp`
/// must be the paste-ability report computed for the same pair. Disjoint
/// pairs have no pasting constant; for those, compare against the separation
/// bound using the data in [`LpReport`] instead.
pub fn pasting_bound_check(
    f: &MappedFunction,
    pair: &SubsetPair,
    lp: &LpReport,
    tol: f64,
) -> Result<BoundCheckReport> {
    if pair.is_disjoint() || lp.disjoint {
        return Err(Error::input(
            "A and B are disjoint, so no pasting constant exists; use the separation bound \
             (image diameter / separation) from the lp report instead",
        ));
    }
    let n = f.domain().n();
    let union = pair.union();
    if union.len() != n || union.last() != Some(&(n - 1)) {
        return Err(Error::input(
            "f must be defined on exactly A ∪ B; restrict it to the union first",
        ));
    }
    let k =
        lp.k.ok_or_else(|| Error::input("lp report carries no constant k"))?;

    let lip_a = lipschitz_constant(&restrict_function(f, pair.a())?).value;
    let lip_b = lipschitz_constant(&restrict_function(f, pair.b())?).value;
    let l0 = lip_a.max(lip_b);
    let l = l0 * k;
    let lip_f = lipschitz_constant(f).value;
    let bound = l.max(l0);
    let scale = bound.max(lip_f);
    let verdict = lip_f <= bound + tol * scale;
    let tight = (lip_f - bound).abs() <= tol * scale;
    Ok(BoundCheckReport {
        lip_a,
        lip_b,
        l0,
        k,
        l,
        lip_f,
        bound,
        verdict,
        tight,
    })
}
