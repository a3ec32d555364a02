//! Lipschitz constants, paste-ability constants, and metric gluing on finite
//! metric spaces.
//!
//! The toolkit answers one family of questions exactly, by enumeration: given
//! a finite metric space, two subsets A and B, and a function that is
//! Lipschitz on each subset separately, what happens on A ∪ B?
//!
//! * [`lipschitz::lipschitz_constant`] measures Lip f as the exact maximum of
//!   image-to-domain distance ratios.
//! * [`pasting::lp_constant`] computes the paste-ability constant k of the
//!   pair: the worst factor by which a cross pair a ∈ A, b ∈ B must pay to be
//!   routed through a shared point instead of going directly. The pasting
//!   inequality Lip f ≤ max(L₀·k, L₀) with L₀ = max(Lip f|_A, Lip f|_B) is
//!   checked by [`lipschitz::pasting_bound_check`].
//! * [`pasting::glued_metric`] and [`pasting::converse_witness`] show k is
//!   sharp: the identity into the glued metric is an isometry on each subset
//!   but has Lipschitz constant exactly k on the union.
//! * [`locality`] certifies k region by region over a cover of A ∩ B.
//! * [`geometry`] samples the two canonical behaviours: transverse crossings
//!   (bounded k under refinement) and a tangentially touching line and
//!   parabola (k blowing up like 2/h).
//!
//! ```
//! use lipglue::{FiniteMetricSpace, SubsetPair};
//! use lipglue::pasting::lp_constant;
//!
//! // Three points, all unit distances apart; split them into {p, r} and
//! // {q, r}. The only way from p to q through the shared point r costs 2.
//! let space = FiniteMetricSpace::new(
//!     vec!["p".into(), "q".into(), "r".into()],
//!     vec![
//!         vec![0.0, 1.0, 1.0],
//!         vec![1.0, 0.0, 1.0],
//!         vec![1.0, 1.0, 0.0],
//!     ],
//! )?;
//! let pair = SubsetPair::new(vec![0, 2], vec![1, 2], 3)?;
//! let report = lp_constant(&space, &pair)?;
//! assert_eq!(report.k, Some(2.0));
//! assert_eq!(report.witness_pair, Some((0, 1)));
//! # Ok::<(), lipglue::Error>(())
//! ```
//!
//! Distances are 64-bit floats and every supremum is a finite maximum, so all
//! results are deterministic; reports carry canonical (lexicographically
//! smallest) witnesses. Tolerances are relative to the largest distance in
//! play and only affect verdicts, never the computed constants.

// Validation sites compare with `!(x > 0.0)` on purpose: the negated form is
// true for NaN, so NaN inputs fall into the error branch without a separate
// is_nan call. Rewriting them the way the lint wants would accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod io;
pub mod lipschitz;
pub mod locality;
pub mod pasting;
pub mod space;

pub use error::{Error, Result};
pub use space::{
    random_metric, restrict, shortest_path_completion, verify_metric, verify_metric_capped,
    FiniteMetricSpace, SubsetPair, ViolationKind, ViolationReport, DEFAULT_TOL, VIOLATION_CAP,
};
