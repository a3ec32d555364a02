//! Error type shared across the crate.
//!
//! Two failure families matter to callers: inputs that cannot be used at all
//! (bad shapes, out-of-range indices, unusable parameters) and computations
//! whose mathematical outcome is negative (a glued matrix that fails the
//! metric axioms). The CLI maps the former to exit code 2 and the latter to
//! exit code 1, so the distinction is kept at the type level.

use crate::space::ViolationReport;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The input cannot be interpreted: wrong shape, bad index, bad parameter.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A k-nearest-neighbour graph fell apart into several components, so no
    /// finite geodesic metric exists. Components are listed as sorted index
    /// sets.
    #[error("{}", disconnected_message(components))]
    Disconnected { components: Vec<Vec<usize>> },

    /// A matrix that was supposed to be a metric failed the axiom check.
    /// Carries the (capped, canonically ordered) violation list.
    #[error("result is not a metric: {} violation(s), first: {:?}", violations.len(), violations.first())]
    NotAMetric { violations: Vec<ViolationReport> },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

fn disconnected_message(components: &[Vec<usize>]) -> String {
    let mut msg = format!(
        "neighbour graph is disconnected: {} components with sizes [",
        components.len()
    );
    for (i, c) in components.iter().enumerate() {
        if i > 0 {
            msg.push_str(", ");
        }
        msg.push_str(&c.len().to_string());
    }
    msg.push_str("]; members ");
    for (i, c) in components.iter().enumerate() {
        if i > 0 {
            msg.push_str(" / ");
        }
        let shown: Vec<String> = c.iter().take(5).map(|i| i.to_string()).collect();
        msg.push_str(&shown.join(","));
        if c.len() > 5 {
            msg.push_str(",...");
        }
    }
    msg
}
