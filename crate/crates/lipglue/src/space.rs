//! Finite metric spaces stored as dense distance matrices.
//!
//! A [`FiniteMetricSpace`] is a labelled point set with an n-by-n matrix of
//! pairwise distances. Construction only enforces well-formedness (square,
//! finite, non-negative entries); whether the matrix actually satisfies the
//! metric axioms is a separate, exhaustive question answered by
//! [`verify_metric`]. That split matters: a triangle violation is a *finding*
//! about data the caller handed us, not a reason to refuse the data.
//!
//! The module also carries [`SubsetPair`], the index-set view of two subsets
//! A and B whose exact intersection drives everything in the pasting and
//! locality modules. Membership is by index, never by distance threshold, so
//! "shared point" has one unambiguous meaning throughout the crate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default relative tolerance for axiom checks and verdicts. Comparisons are
/// made against `tol * scale` where `scale` is the largest matrix entry, so a
/// uniform rescaling of the space does not change what counts as a violation.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default cap on how many violations [`verify_metric`] reports.
pub const VIOLATION_CAP: usize = 100;

/// A finite labelled point set with a dense, well-formed distance matrix.
///
/// Invariants enforced at construction: at least one point, one label per
/// point, square matrix, every entry finite and non-negative. The metric
/// axioms themselves (zero diagonal, symmetry, positivity off the diagonal,
/// triangle inequality) are checked by [`verify_metric`], not here.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>, // row-major, n * n
    n: usize,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::input("a metric space needs at least one point"));
        }
        if labels.len() != n {
            return Err(Error::input(format!(
                "{} labels for {} points",
                labels.len(),
                n
            )));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "dist matrix is not square: row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::input(format!(
                        "dist[{i}][{j}] is not a finite number"
                    )));
                }
                if v < 0.0 {
                    return Err(Error::input(format!("dist[{i}][{j}] is negative ({v})")));
                }
                dist.push(v);
            }
        }
        Ok(FiniteMetricSpace { labels, dist, n })
    }

    /// Internal constructor for matrices we built ourselves.
    pub(crate) fn from_flat(labels: Vec<String>, dist: Vec<f64>, n: usize) -> Self {
        debug_assert_eq!(labels.len(), n);
        debug_assert_eq!(dist.len(), n * n);
        debug_assert!(dist.iter().all(|v| v.is_finite() && *v >= 0.0));
        FiniteMetricSpace { labels, dist, n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Largest entry of the matrix; the scale that relative tolerances are
    /// measured against. Zero for the one-point space.
    pub fn max_entry(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// The matrix as rows, for serialization.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.dist[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }
}

/// "p0", "p1", ... used by every generator that has no better names to offer.
pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Sorted, deduplicated, bounds-checked copy of an index list.
pub(crate) fn normalize_indices(indices: &[usize], n: usize) -> Result<Vec<usize>> {
    if indices.is_empty() {
        return Err(Error::input("empty index set"));
    }
    let mut idx = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
        return Err(Error::input(format!(
            "index {bad} out of range for a space with {n} points"
        )));
    }
    Ok(idx)
}

/// Two index subsets of one space, with their exact intersection.
///
/// Indices are stored sorted and deduplicated. The intersection is computed
/// once, by index equality; no distance threshold is ever involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetPair {
    a: Vec<usize>,
    b: Vec<usize>,
    intersection: Vec<usize>,
}

impl SubsetPair {
    /// Build a pair of subsets of a space with `n` points. Both sets must be
    /// nonempty and in range.
    pub fn new(a: Vec<usize>, b: Vec<usize>, n: usize) -> Result<Self> {
        let a = normalize_indices(&a, n).map_err(|e| prefix_err("subset A", e))?;
        let b = normalize_indices(&b, n).map_err(|e| prefix_err("subset B", e))?;
        let intersection = sorted_intersection(&a, &b);
        Ok(SubsetPair { a, b, intersection })
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn intersection(&self) -> &[usize] {
        &self.intersection
    }

    pub fn is_disjoint(&self) -> bool {
        self.intersection.is_empty()
    }

    /// Sorted union A ∪ B.
    pub fn union(&self) -> Vec<usize> {
        let mut u = self.a.clone();
        u.extend_from_slice(&self.b);
        u.sort_unstable();
        u.dedup();
        u
    }

    /// Largest index mentioned by either subset.
    pub fn max_index(&self) -> usize {
        let ma = *self.a.last().expect("A is nonempty");
        let mb = *self.b.last().expect("B is nonempty");
        ma.max(mb)
    }

    /// Re-express the pair relative to its own union: returns the sorted
    /// union (original indices) and the same pair in union positions. Useful
    /// before restricting a space to A ∪ B.
    pub fn reindex_to_union(&self) -> (Vec<usize>, SubsetPair) {
        let union = self.union();
        let pos = |i: usize| union.binary_search(&i).expect("member of union");
        let a: Vec<usize> = self.a.iter().map(|&i| pos(i)).collect();
        let b: Vec<usize> = self.b.iter().map(|&i| pos(i)).collect();
        let intersection: Vec<usize> = self.intersection.iter().map(|&i| pos(i)).collect();
        (union, SubsetPair { a, b, intersection })
    }
}

fn prefix_err(what: &str, e: Error) -> Error {
    match e {
        Error::InvalidInput(msg) => Error::InvalidInput(format!("{what}: {msg}")),
        other => other,
    }
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
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

/// Which metric axiom a violation offends. The variants are ordered; reports
/// are sorted by kind first, witness second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    /// d(i,i) is not zero. Witness: [i].
    Diagonal,
    /// d(i,j) differs from d(j,i). Witness: [i, j] with i < j.
    Symmetry,
    /// d(i,j) is (numerically) zero for distinct i, j. Witness: [i, j], i < j.
    Positivity,
    /// d(i,j) exceeds d(i,k) + d(k,j). Witness: [i, j, k] with i < j.
    Triangle,
}

/// One concrete axiom failure, with the indices that exhibit it.
///
/// `magnitude` is how far past the tolerance threshold the entry lies: the
/// diagonal excess |d(i,i)|, the asymmetry |d(i,j) - d(j,i)|, or the triangle
/// excess d(i,j) - d(i,k) - d(k,j). For positivity, where the offence is a
/// distance that vanished rather than one that grew, it is the shortfall
/// below the tolerance floor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    pub kind: ViolationKind,
    pub witness: Vec<usize>,
    pub magnitude: f64,
}

/// Exhaustively check the metric axioms, reporting up to [`VIOLATION_CAP`]
/// violations in canonical order (kind, then witness indices).
///
/// The scan is O(n^3) and deliberately so: the whole point of the toolkit is
/// that at desk scale we can afford certainty. Only violations larger than
/// `tol * max_entry` are reported, so tiny floating-point residue does not
/// show up as geometry.
pub fn verify_metric(space: &FiniteMetricSpace, tol: f64) -> Vec<ViolationReport> {
    verify_metric_capped(space, tol, VIOLATION_CAP)
}

/// [`verify_metric`] with an explicit report cap.
pub fn verify_metric_capped(
    space: &FiniteMetricSpace,
    tol: f64,
    cap: usize,
) -> Vec<ViolationReport> {
    let n = space.n();
    let thr = tol * space.max_entry();
    let mut out = Vec::new();

    // Each kind is enumerated in ascending witness order, and the kinds in
    // their canonical order, so the output is born sorted and the cap can cut
    // the scan short instead of trimming afterwards.
    for i in 0..n {
        if out.len() == cap {
            return out;
        }
        let dii = space.d(i, i);
        if dii.abs() > thr {
            out.push(ViolationReport {
                kind: ViolationKind::Diagonal,
                witness: vec![i],
                magnitude: dii.abs(),
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if out.len() == cap {
                return out;
            }
            let gap = (space.d(i, j) - space.d(j, i)).abs();
            if gap > thr {
                out.push(ViolationReport {
                    kind: ViolationKind::Symmetry,
                    witness: vec![i, j],
                    magnitude: gap,
                });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if out.len() == cap {
                return out;
            }
            let d = space.d(i, j);
            if d <= thr {
                out.push(ViolationReport {
                    kind: ViolationKind::Positivity,
                    witness: vec![i, j],
                    magnitude: thr - d,
                });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let dij = space.d(i, j);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if out.len() == cap {
                    return out;
                }
                let excess = dij - space.d(i, k) - space.d(k, j);
                if excess > thr {
                    out.push(ViolationReport {
                        kind: ViolationKind::Triangle,
                        witness: vec![i, j, k],
                        magnitude: excess,
                    });
                }
            }
        }
    }
    out
}

/// Repair a symmetric weight matrix into a metric by taking all-pairs
/// shortest paths (Floyd-Warshall).
///
/// Weights must be square, finite, exactly symmetric, zero on the diagonal
/// and strictly positive off it. The result is a genuine metric: the triangle
/// inequality holds by construction, every distance is at most the input
/// weight, and re-running the completion is a no-op.
pub fn shortest_path_completion(weights: &[Vec<f64>]) -> Result<FiniteMetricSpace> {
    let n = weights.len();
    if n == 0 {
        return Err(Error::input("empty weight matrix"));
    }
    for (i, row) in weights.iter().enumerate() {
        if row.len() != n {
            return Err(Error::input(format!(
                "weight matrix is not square: row {} has {} entries, expected {}",
                i,
                row.len(),
                n
            )));
        }
        for (j, &w) in row.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::input(format!(
                    "weight[{i}][{j}] is not a finite number"
                )));
            }
            if i == j && w != 0.0 {
                return Err(Error::input(format!(
                    "weight[{i}][{i}] = {w}, diagonal must be exactly zero"
                )));
            }
            if i != j && w <= 0.0 {
                return Err(Error::input(format!(
                    "weight[{i}][{j}] = {w}, off-diagonal weights must be positive"
                )));
            }
            if weights[j][i] != w {
                return Err(Error::input(format!(
                    "weight matrix is not symmetric at ({i},{j})"
                )));
            }
        }
    }

    let mut d: Vec<f64> = weights.iter().flatten().copied().collect();
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            for j in 0..n {
                let via = dik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    Ok(FiniteMetricSpace::from_flat(default_labels(n), d, n))
}

/// The subspace on the given indices (sorted, deduplicated), labels carried
/// over in their original order.
///
/// Restricting a metric always yields a metric, but not a shortest-path one:
/// the restriction of a completion is generally not the completion of the
/// restriction, because routes through discarded points are lost.
pub fn restrict(space: &FiniteMetricSpace, indices: &[usize]) -> Result<FiniteMetricSpace> {
    let idx = normalize_indices(indices, space.n())?;
    let m = idx.len();
    let mut dist = Vec::with_capacity(m * m);
    for &i in &idx {
        for &j in &idx {
            dist.push(space.d(i, j));
        }
    }
    let labels = idx.iter().map(|&i| space.label(i).to_string()).collect();
    Ok(FiniteMetricSpace::from_flat(labels, dist, m))
}

/// Deterministic random metric space: `n` points split over two clusters of
/// unit jitter whose centres sit 100 apart, under the Euclidean metric.
///
/// The two-cluster shape guarantees strongly non-uniform geometry: for n >= 3
/// some cluster holds two points (distance at most 2*sqrt(3)) while every
/// cross-cluster pair is near 100, so the off-diagonal entries span a factor
/// well above 10. For n = 2 there is a single off-diagonal value, so no span
/// to speak of. Same (n, seed) always yields the bitwise-same space.
pub fn random_metric(n: usize, seed: u64) -> Result<FiniteMetricSpace> {
    if n < 2 {
        return Err(Error::input("random_metric needs n >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<[f64; 3]> = Vec::with_capacity(n);
    for i in 0..n {
        let cx = if i % 2 == 0 { 0.0 } else { 100.0 };
        pts.push([
            cx + rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ]);
    }
    let mut dist = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let dx = pts[i][0] - pts[j][0];
            let dy = pts[i][1] - pts[j][1];
            let dz = pts[i][2] - pts[j][2];
            dist.push((dx * dx + dy * dy + dz * dz).sqrt());
        }
    }
    Ok(FiniteMetricSpace::from_flat(default_labels(n), dist, n))
}
