//! Point samplers and distance builders for curves and model subspaces.
//!
//! Everything upstream works on abstract distance matrices; this module is
//! where matrices come from. It samples concrete geometric families, the
//! two canonical intersection behaviours among them:
//!
//! * transverse crossings (two lines, axis-aligned model subspaces, great
//!   circles on the sphere), where the paste-ability constant of the sampled
//!   pair stays bounded as the sampling refines, and
//! * the tangential touching of a line and a parabola, where it blows up
//!   like 2 / h as the closest non-shared parameter h shrinks.
//!
//! Intersection points are always constructed as shared indices. Nothing is
//! ever matched up by coordinates after the fact: the routing minimum in the
//! pasting ratio ranges over the exact shared set, and a near-duplicate point
//! masquerading as an intersection would quietly change every constant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pasting::lp_constant;
use crate::space::{default_labels, FiniteMetricSpace, SubsetPair};

/// Two sampled points closer than this are treated as one point appearing
/// twice, which is an input error (it can never satisfy metric positivity).
pub const DUPLICATE_TOL: f64 = 1e-12;

/// Largest point count a single sweep record may ask for. Beyond this the
/// dense matrix stops being a desk-scale object; the sweep reports an input
/// error suggesting a coarser h instead of thrashing memory.
pub const SWEEP_POINT_CAP: usize = 5000;

/// How the distance matrix is derived from sampled coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricMode {
    /// Straight-line distance in the ambient space.
    Euclidean,
    /// Great-circle distance arccos⟨x, y⟩ between unit vectors.
    SphereIntrinsic,
    /// Shortest paths over the symmetric k-nearest-neighbour graph with
    /// Euclidean edge weights.
    GraphGeodesic { k_neighbors: usize },
}

/// A sampled configuration: coordinates in ℝⁿ, the index sets tagging the
/// two subsets, and the rule for turning coordinates into distances.
///
/// Points shared by both subsets appear once in `coordinates` and are listed
/// in both index sets, so the realized [`SubsetPair`] has an exact,
/// index-level intersection.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedSample {
    coordinates: Vec<Vec<f64>>,
    a_indices: Vec<usize>,
    b_indices: Vec<usize>,
    metric_mode: MetricMode,
}

impl EmbeddedSample {
    pub fn new(
        coordinates: Vec<Vec<f64>>,
        a_indices: Vec<usize>,
        b_indices: Vec<usize>,
        metric_mode: MetricMode,
    ) -> Result<Self> {
        let dim = check_coordinates(&coordinates)?;
        if dim < 2 {
            return Err(Error::input(
                "an embedded sample needs ambient dimension at least 2",
            ));
        }
        let n = coordinates.len();
        // Validate the tags now so a bad sample fails at construction, not at
        // realization; the pair itself is rebuilt in realize().
        SubsetPair::new(a_indices.clone(), b_indices.clone(), n)?;
        Ok(EmbeddedSample {
            coordinates,
            a_indices,
            b_indices,
            metric_mode,
        })
    }

    pub fn coordinates(&self) -> &[Vec<f64>] {
        &self.coordinates
    }

    pub fn dim(&self) -> usize {
        self.coordinates[0].len()
    }

    pub fn a_indices(&self) -> &[usize] {
        &self.a_indices
    }

    pub fn b_indices(&self) -> &[usize] {
        &self.b_indices
    }

    pub fn metric_mode(&self) -> MetricMode {
        self.metric_mode
    }

    /// Build the distance matrix according to the metric mode and pair the
    /// subsets up. The heavy lifting for paste-ability analysis starts here.
    pub fn realize(&self) -> Result<(FiniteMetricSpace, SubsetPair)> {
        let space = match self.metric_mode {
            MetricMode::Euclidean => euclidean_space_from_points(&self.coordinates)?,
            MetricMode::SphereIntrinsic => sphere_intrinsic_space(&self.coordinates)?,
            MetricMode::GraphGeodesic { k_neighbors } => {
                graph_geodesic_metric(&self.coordinates, k_neighbors)?
            }
        };
        let pair = SubsetPair::new(self.a_indices.clone(), self.b_indices.clone(), space.n())?;
        Ok((space, pair))
    }
}

/// Common shape validation: at least one point, consistent dimension >= 1,
/// finite entries. Returns the dimension.
fn check_coordinates(coordinates: &[Vec<f64>]) -> Result<usize> {
    let Some(first) = coordinates.first() else {
        return Err(Error::input("no points given"));
    };
    let dim = first.len();
    if dim == 0 {
        return Err(Error::input("points must have at least one coordinate"));
    }
    for (i, p) in coordinates.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::input(format!(
                "point {i} has {} coordinates, expected {dim}",
                p.len()
            )));
        }
        if let Some(c) = p.iter().find(|c| !c.is_finite()) {
            return Err(Error::input(format!(
                "point {i} has a non-finite coordinate ({c})"
            )));
        }
    }
    Ok(dim)
}

#[inline]
fn euclid(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Scan a finished matrix for coincident points and report the first few
/// offending index pairs.
fn reject_duplicates(dist: &[f64], n: usize) -> Result<()> {
    let mut dups = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if dist[i * n + j] <= DUPLICATE_TOL {
                dups.push((i, j));
                if dups.len() == 5 {
                    let list = dups
                        .iter()
                        .map(|(a, b)| format!("({a},{b})"))
                        .collect::<Vec<_>>()
                        .join(", ");
                    return Err(Error::input(format!(
                        "coincident points at index pairs {list}, ... (listing capped)"
                    )));
                }
            }
        }
    }
    if dups.is_empty() {
        return Ok(());
    }
    let list = dups
        .iter()
        .map(|(a, b)| format!("({a},{b})"))
        .collect::<Vec<_>>()
        .join(", ");
    Err(Error::input(format!(
        "coincident points at index pairs {list}; duplicate points cannot form a metric"
    )))
}

/// Pairwise straight-line distances of a point cloud.
///
/// Points closer than [`DUPLICATE_TOL`] are rejected with their indices:
/// duplicates would violate metric positivity, and silently merging them
/// would change subset semantics.
pub fn euclidean_space_from_points(coordinates: &[Vec<f64>]) -> Result<FiniteMetricSpace> {
    check_coordinates(coordinates)?;
    let n = coordinates.len();
    if n < 2 {
        return Err(Error::input("need at least 2 points"));
    }
    let mut dist = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclid(&coordinates[i], &coordinates[j]);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    reject_duplicates(&dist, n)?;
    Ok(FiniteMetricSpace::from_flat(default_labels(n), dist, n))
}

/// Great-circle distances between unit vectors: d(x, y) = arccos⟨x, y⟩.
///
/// Points must already sit on the unit sphere to within 1e-12; within that
/// band they are renormalized (construction noise), beyond it rejected.
fn sphere_intrinsic_space(coordinates: &[Vec<f64>]) -> Result<FiniteMetricSpace> {
    check_coordinates(coordinates)?;
    let n = coordinates.len();
    if n < 2 {
        return Err(Error::input("need at least 2 points"));
    }
    let mut pts = Vec::with_capacity(n);
    for (i, p) in coordinates.iter().enumerate() {
        let norm = p.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::input(format!(
                "point {i} has norm {norm}, not on the unit sphere"
            )));
        }
        pts.push(p.iter().map(|c| c / norm).collect::<Vec<f64>>());
    }
    // Coincidence is checked on coordinates, not on arccos output: rounding
    // in the dot product inflates tiny angles to ~1e-8, which would let true
    // duplicates slip past an angle-based threshold.
    let mut dist = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            if euclid(&pts[i], &pts[j]) <= DUPLICATE_TOL {
                return Err(Error::input(format!(
                    "coincident points at indices ({i},{j}) on the sphere"
                )));
            }
            let dot = pts[i]
                .iter()
                .zip(&pts[j])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                .clamp(-1.0, 1.0);
            let d = dot.acos();
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    Ok(FiniteMetricSpace::from_flat(default_labels(n), dist, n))
}

/// Geodesic distances over the symmetric k-nearest-neighbour graph: connect
/// each point to its `k_neighbors` nearest others (ties broken by index),
/// weight edges by Euclidean length, and close under all-pairs shortest
/// paths.
///
/// The result is a genuine metric whenever the graph is connected; a
/// disconnected graph is reported with its components, since no finite
/// geodesic exists across them.
pub fn graph_geodesic_metric(
    coordinates: &[Vec<f64>],
    k_neighbors: usize,
) -> Result<FiniteMetricSpace> {
    check_coordinates(coordinates)?;
    let n = coordinates.len();
    if n < 2 {
        return Err(Error::input("need at least 2 points"));
    }
    if k_neighbors < 2 {
        return Err(Error::input("k_neighbors must be at least 2"));
    }
    if k_neighbors >= n {
        return Err(Error::input(format!(
            "k_neighbors = {k_neighbors} but each point has only {} others",
            n - 1
        )));
    }

    let mut euclidean = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclid(&coordinates[i], &coordinates[j]);
            euclidean[i * n + j] = d;
            euclidean[j * n + i] = d;
        }
    }
    reject_duplicates(&euclidean, n)?;

    let mut dist = vec![f64::INFINITY; n * n];
    let mut order: Vec<usize> = Vec::with_capacity(n - 1);
    for i in 0..n {
        dist[i * n + i] = 0.0;
        order.clear();
        order.extend((0..n).filter(|&j| j != i));
        order.sort_by(|&a, &b| {
            euclidean[i * n + a]
                .partial_cmp(&euclidean[i * n + b])
                .expect("distances are finite")
                .then(a.cmp(&b))
        });
        for &j in &order[..k_neighbors] {
            let w = euclidean[i * n + j];
            dist[i * n + j] = w;
            dist[j * n + i] = w;
        }
    }

    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = dik + dist[k * n + j];
                if via < dist[i * n + j] {
                    dist[i * n + j] = via;
                }
            }
        }
    }

    if dist.iter().any(|d| d.is_infinite()) {
        return Err(Error::Disconnected {
            components: components_of(&dist, n),
        });
    }
    Ok(FiniteMetricSpace::from_flat(default_labels(n), dist, n))
}

/// Group indices by mutual reachability (finite shortest-path distance).
fn components_of(dist: &[f64], n: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&j| dist[i * n + j].is_finite()).collect();
        for &j in &comp {
            seen[j] = true;
        }
        components.push(comp);
    }
    components
}

/// Dimension split of the axis-aligned transverse model: the first subset is
/// {u = 0}, the second {v = 0}, and they share the w coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearChart {
    pub du: usize,
    pub dv: usize,
    pub dw: usize,
}

impl LinearChart {
    pub fn new(du: usize, dv: usize, dw: usize) -> Result<Self> {
        if du < 1 || dv < 1 {
            return Err(Error::input(
                "a transverse chart needs du >= 1 and dv >= 1; with either at zero one \
                 subset contains the other",
            ));
        }
        Ok(LinearChart { du, dv, dw })
    }

    pub fn ambient_dim(&self) -> usize {
        self.du + self.dv + self.dw
    }
}

/// Symmetric axis grid with exactly `2 * half + 1` values: i / half for
/// i in -half ..= half. Contains -1, 0, 1 exactly, which is what lets shared
/// points be shared by construction.
fn axis_grid(half: usize) -> Vec<f64> {
    (-(half as isize)..=half as isize)
        .map(|i| i as f64 / half as f64)
        .collect()
}

/// All tuples of `dims` values drawn from `grid`, first coordinate slowest.
/// Zero dimensions yield the single empty tuple.
fn grid_tuples(grid: &[f64], dims: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..dims {
        let mut next = Vec::with_capacity(out.len() * grid.len());
        for t in &out {
            for &g in grid {
                let mut t2 = Vec::with_capacity(t.len() + 1);
                t2.extend_from_slice(t);
                t2.push(g);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// A line touching a parabola: the classic tangential pair whose
/// paste-ability constant diverges under refinement.
///
/// The subsets are A = {(t, 0)} and B = {(t, t²)} for t in {0} followed by an
/// `n_per_curve - 1`-point grid on [t_min, 1]; the origin is the single
/// shared point. The constant behaves like (1 + sqrt(1 + t_min²)) / t_min,
/// so h = t_min is the divergence knob. Distances are Euclidean.
///
/// t_min must lie in (0, 1]; t_min = 1 collapses the grid to one point and is
/// only allowed with n_per_curve = 2. Very small t_min (below about 1e-6)
/// fails the duplicate check instead, because (t, 0) and (t, t²) come within
/// 1e-12 of each other.
pub fn tangential_parabola_sample(n_per_curve: usize, t_min: f64) -> Result<EmbeddedSample> {
    if n_per_curve < 2 {
        return Err(Error::input("n_per_curve must be at least 2"));
    }
    if !(t_min > 0.0) || t_min > 1.0 {
        return Err(Error::input(format!(
            "t_min must lie in (0, 1], got {t_min}"
        )));
    }
    let m = n_per_curve - 1;
    let grid: Vec<f64> = if m == 1 {
        vec![t_min]
    } else {
        if t_min == 1.0 {
            return Err(Error::input(
                "t_min = 1 leaves no room for a grid; use n_per_curve = 2",
            ));
        }
        let step = (1.0 - t_min) / (m - 1) as f64;
        (0..m)
            .map(|i| {
                if i == m - 1 {
                    1.0
                } else {
                    t_min + i as f64 * step
                }
            })
            .collect()
    };

    let mut coordinates = Vec::with_capacity(2 * m + 1);
    coordinates.push(vec![0.0, 0.0]);
    for &t in &grid {
        coordinates.push(vec![t, 0.0]);
    }
    for &t in &grid {
        coordinates.push(vec![t, t * t]);
    }
    let a_indices: Vec<usize> = std::iter::once(0).chain(1..=m).collect();
    let b_indices: Vec<usize> = std::iter::once(0).chain(m + 1..=2 * m).collect();
    EmbeddedSample::new(coordinates, a_indices, b_indices, MetricMode::Euclidean)
}

/// [`tangential_parabola_sample`] realized to a space and pair.
pub fn sample_tangential_parabola(
    n_per_curve: usize,
    t_min: f64,
) -> Result<(FiniteMetricSpace, SubsetPair)> {
    tangential_parabola_sample(n_per_curve, t_min)?.realize()
}

/// The coordinate axes in the plane, each sampled at ±i/(n/2) for
/// i = 1 ..= n/2, sharing the origin: the simplest transverse crossing.
///
/// `n_per_line` counts the non-origin points per line and must be even so the
/// samples sit symmetrically. The sampled constant approaches sqrt(2) from
/// below (the worst pairs are (s, 0) against (0, s)).
pub fn transverse_lines_sample(n_per_line: usize) -> Result<EmbeddedSample> {
    if n_per_line < 2 {
        return Err(Error::input("n_per_line must be at least 2"));
    }
    if !n_per_line.is_multiple_of(2) {
        return Err(Error::input(
            "n_per_line counts the non-origin points per line, placed at ±i/(n/2); \
             use an even count",
        ));
    }
    let half = n_per_line / 2;
    let mut coordinates = Vec::with_capacity(2 * n_per_line + 1);
    coordinates.push(vec![0.0, 0.0]);
    for i in 1..=half {
        let v = i as f64 / half as f64;
        coordinates.push(vec![v, 0.0]);
        coordinates.push(vec![-v, 0.0]);
    }
    for i in 1..=half {
        let v = i as f64 / half as f64;
        coordinates.push(vec![0.0, v]);
        coordinates.push(vec![0.0, -v]);
    }
    let a_indices: Vec<usize> = std::iter::once(0).chain(1..=n_per_line).collect();
    let b_indices: Vec<usize> = std::iter::once(0)
        .chain(n_per_line + 1..=2 * n_per_line)
        .collect();
    EmbeddedSample::new(coordinates, a_indices, b_indices, MetricMode::Euclidean)
}

/// [`transverse_lines_sample`] realized to a space and pair.
pub fn sample_transverse_lines(n_per_line: usize) -> Result<(FiniteMetricSpace, SubsetPair)> {
    transverse_lines_sample(n_per_line)?.realize()
}

/// Two great circles on the unit sphere through the poles (±1, 0, 0),
/// meeting at dihedral angle `angle`, under the intrinsic (arc-length)
/// metric.
///
/// Each circle carries `n_per_circle` equally spaced samples; the two
/// antipodal crossing points are stored once, as indices 0 and 1, and belong
/// to both subsets. The count must be even (and at least 4) so those two
/// points land on the sample grid exactly.
pub fn great_circles_sample(n_per_circle: usize, angle: f64) -> Result<EmbeddedSample> {
    if !(angle > 0.0) || !(angle < std::f64::consts::PI) {
        return Err(Error::input(format!(
            "angle must lie strictly between 0 and pi, got {angle}"
        )));
    }
    if n_per_circle < 4 {
        return Err(Error::input("n_per_circle must be at least 4"));
    }
    if !n_per_circle.is_multiple_of(2) {
        return Err(Error::input(
            "n_per_circle must be even so both crossing points land on the sample grid",
        ));
    }
    let n = n_per_circle;
    let (sin_a, cos_a) = angle.sin_cos();
    let mut coordinates = Vec::with_capacity(2 * n - 2);
    coordinates.push(vec![1.0, 0.0, 0.0]);
    coordinates.push(vec![-1.0, 0.0, 0.0]);
    let mut a_indices = vec![0, 1];
    let mut b_indices = vec![0, 1];
    for j in 1..n {
        if j == n / 2 {
            continue;
        }
        let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let (st, ct) = t.sin_cos();
        a_indices.push(coordinates.len());
        coordinates.push(vec![ct, st, 0.0]);
    }
    for j in 1..n {
        if j == n / 2 {
            continue;
        }
        let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let (st, ct) = t.sin_cos();
        b_indices.push(coordinates.len());
        coordinates.push(vec![ct, st * cos_a, st * sin_a]);
    }
    EmbeddedSample::new(
        coordinates,
        a_indices,
        b_indices,
        MetricMode::SphereIntrinsic,
    )
}

/// [`great_circles_sample`] realized to a space and pair.
pub fn sample_great_circles(
    n_per_circle: usize,
    angle: f64,
) -> Result<(FiniteMetricSpace, SubsetPair)> {
    great_circles_sample(n_per_circle, angle)?.realize()
}

/// The flat model of a transverse crossing: A = {u = 0} and B = {v = 0}
/// inside [-1, 1]^(du+dv+dw), each coordinate sampled on a symmetric grid of
/// `grid` values, shared points (u = 0, v = 0, w) stored once.
///
/// `grid` must be odd (so 0 is a grid value; the intersection lives at
/// u = 0, v = 0) and at least 3. For these samples the paste-ability
/// constant is bounded by sqrt(3) no matter the split or resolution; with the
/// inner route pinned at w = w(a) it is in fact never above sqrt(2).
pub fn linear_transverse_sample(chart: LinearChart, grid: usize) -> Result<EmbeddedSample> {
    if grid < 3 || grid.is_multiple_of(2) {
        return Err(Error::input(
            "grid must be an odd count of at least 3, so that 0 and ±1 are grid values",
        ));
    }
    let half = (grid - 1) / 2;
    let axis = axis_grid(half);
    let u_tuples = grid_tuples(&axis, chart.du);
    let v_tuples = grid_tuples(&axis, chart.dv);
    let w_tuples = grid_tuples(&axis, chart.dw);
    let zero_u = vec![0.0; chart.du];
    let zero_v = vec![0.0; chart.dv];
    let is_zero = |t: &[f64]| t.iter().all(|&c| c == 0.0);

    let mut coordinates = Vec::new();
    let mut point = |u: &[f64], v: &[f64], w: &[f64]| -> usize {
        let mut p = Vec::with_capacity(u.len() + v.len() + w.len());
        p.extend_from_slice(u);
        p.extend_from_slice(v);
        p.extend_from_slice(w);
        coordinates.push(p);
        coordinates.len() - 1
    };

    // Shared block first: (0, 0, w) for every w tuple.
    let shared: Vec<usize> = w_tuples
        .iter()
        .map(|w| point(&zero_u, &zero_v, w))
        .collect();

    let mut a_indices = shared.clone();
    for v in &v_tuples {
        if is_zero(v) {
            continue;
        }
        for w in &w_tuples {
            a_indices.push(point(&zero_u, v, w));
        }
    }
    let mut b_indices = shared;
    for u in &u_tuples {
        if is_zero(u) {
            continue;
        }
        for w in &w_tuples {
            b_indices.push(point(u, &zero_v, w));
        }
    }
    EmbeddedSample::new(coordinates, a_indices, b_indices, MetricMode::Euclidean)
}

/// [`linear_transverse_sample`] realized to a space and pair.
pub fn sample_linear_transverse(
    chart: LinearChart,
    grid: usize,
) -> Result<(FiniteMetricSpace, SubsetPair)> {
    linear_transverse_sample(chart, grid)?.realize()
}

/// One row of a refinement sweep: the sample's spacing, its size, and the
/// paste-ability constant it produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    /// Achieved minimum parameter spacing (the requested value, snapped to
    /// the family's grid rule).
    pub h: f64,
    /// Total points in the sampled space.
    pub n_points: usize,
    /// Paste-ability constant of the sampled pair.
    pub k: f64,
    /// k · h, the scale-free divergence diagnostic: it tends to 2 for the
    /// tangential family and to 0 for the bounded ones.
    pub k_times_h: f64,
}

/// Which sample family a sweep refines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepFamily {
    TangentialParabola,
    TransverseLines,
    GreatCircles { angle: f64 },
    LinearTransverse { chart: LinearChart },
}

impl SweepFamily {
    /// Build the family's sample at spacing `h`. Returns the achieved h
    /// (snapped to the family's grid rule) alongside the realized instance.
    fn instantiate(&self, h: f64) -> Result<(f64, FiniteMetricSpace, SubsetPair)> {
        match *self {
            SweepFamily::TangentialParabola => {
                if h > 1.0 {
                    return Err(Error::input(format!(
                        "parabola spacing h must lie in (0, 1], got {h}"
                    )));
                }
                // Density grows like 1/sqrt(h): enough to pin the smallest
                // parameter at h while keeping the largest record cheap.
                let n = ((1.0 / h.sqrt()).ceil() as usize).max(1) * 2;
                check_sweep_size(2 * n - 1, h)?;
                let (space, pair) = sample_tangential_parabola(n, h)?;
                Ok((h, space, pair))
            }
            SweepFamily::TransverseLines => {
                let half = (1.0 / h).round().max(1.0) as usize;
                check_sweep_size(4 * half + 1, h)?;
                let (space, pair) = sample_transverse_lines(2 * half)?;
                Ok((1.0 / half as f64, space, pair))
            }
            SweepFamily::GreatCircles { angle } => {
                let per_side = (std::f64::consts::PI / h).round().max(2.0) as usize;
                let n = 2 * per_side;
                check_sweep_size(2 * n - 2, h)?;
                let (space, pair) = sample_great_circles(n, angle)?;
                Ok((2.0 * std::f64::consts::PI / n as f64, space, pair))
            }
            SweepFamily::LinearTransverse { chart } => {
                let half = (1.0 / h).round().max(1.0) as usize;
                let g = 2 * half + 1;
                let total = g.pow((chart.dv + chart.dw) as u32)
                    + g.pow((chart.du + chart.dw) as u32)
                    - g.pow(chart.dw as u32);
                check_sweep_size(total, h)?;
                let (space, pair) = sample_linear_transverse(chart, g)?;
                Ok((1.0 / half as f64, space, pair))
            }
        }
    }
}

fn check_sweep_size(total: usize, h: f64) -> Result<()> {
    if total > SWEEP_POINT_CAP {
        return Err(Error::input(format!(
            "h = {h} asks for {total} points, beyond the cap of {SWEEP_POINT_CAP}; \
             use a coarser spacing"
        )));
    }
    Ok(())
}

/// Refine a family over a list of spacings and record the paste-ability
/// constant at each step.
///
/// `h_values` must be positive, finite, and strictly decreasing; the records
/// come back in the same order, carrying the achieved spacing (two requests
/// that snap to the same sample are rejected rather than silently repeated).
/// Runs are deterministic: the same family and list produce bitwise-equal
/// records.
pub fn density_sweep(family: SweepFamily, h_values: &[f64]) -> Result<Vec<SweepRecord>> {
    if h_values.is_empty() {
        return Err(Error::input("h_values is empty"));
    }
    for pair in h_values.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(Error::input(format!(
                "h_values must be strictly decreasing, got {} before {}",
                pair[0], pair[1]
            )));
        }
    }
    if !(h_values[0].is_finite()) || h_values[h_values.len() - 1] <= 0.0 {
        return Err(Error::input("h_values must be finite and positive"));
    }

    let mut records: Vec<SweepRecord> = Vec::with_capacity(h_values.len());
    for &h in h_values {
        let (achieved, space, pair) = family.instantiate(h)?;
        if let Some(prev) = records.last() {
            if achieved >= prev.h {
                return Err(Error::input(format!(
                    "h = {h} snaps to spacing {achieved}, not below the previous record's \
                     {}; thin the h list",
                    prev.h
                )));
            }
        }
        let k = lp_constant(&space, &pair)?
            .k
            .expect("sweep families always share points");
        records.push(SweepRecord {
            h: achieved,
            n_points: space.n(),
            k,
            k_times_h: k * achieved,
        });
    }
    Ok(records)
}
