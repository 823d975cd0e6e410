use thiserror::Error;

use crate::table::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("fixture `{name}`: {reason}")]
    BadFixtureParameter { name: String, reason: String },

    #[error("permutation degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("group closure exceeded the budget of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("order {order} exceeds the limit of {limit} for {what}")]
    OrderCap {
        what: &'static str,
        order: usize,
        limit: usize,
    },

    #[error("subset is not a normal subloop")]
    NotNormal,

    #[error("factor loop multiplication is not well defined: {0}")]
    IllDefined(String),

    #[error("loop lacks two-sided inverses (x\\1 != 1/x for x = {0})")]
    NoTwoSidedInverses(usize),

    #[error("goal identities and quotient construction disagree: {0}")]
    InconsistentLemma2(String),

    #[error("unknown filter `{0}`")]
    UnknownFilter(String),

    #[error("unknown variety `{0}`")]
    UnknownVariety(String),

    #[error("ordering list is empty")]
    EmptyOrderingList,

    #[error("prover adapter failed at iteration {iteration}: {diagnostics}")]
    AdapterFailure {
        iteration: usize,
        diagnostics: String,
    },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors that indicate a bug in this crate rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InconsistentLemma2(_))
    }
}
