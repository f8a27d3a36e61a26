use thiserror::Error;

/// Errors raised by the divisor-theory library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    NoVertices,
    #[error("vertex `{0}` declared more than once")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex index {0} is out of range")]
    VertexIndex(usize),
    #[error("graph is disconnected: `{0}` is unreachable from `{1}`")]
    Disconnected(String, String),
    #[error("divisor has {found} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("divisor is not effective at `{0}`")]
    NotEffectiveInput(String),
    #[error("divisor is negative at `{0}`, which lies outside the seed set")]
    NegativeOffSeed(String),
    #[error("seed set is empty")]
    EmptySeed,
    #[error("genus {0} is below 2")]
    GenusTooSmall(i64),
    #[error("graph is not semistable: weight-0 vertex `{0}` has valence below 2")]
    NotSemistable(String),
    #[error("degree {degree} lies outside [{min}, {max}]")]
    DegreeOutOfRange { degree: i64, min: i64, max: i64 },
    #[error("negative argument {0}")]
    NegativeArgument(i64),
    #[error("{what}: {count} candidates exceed the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        count: u128,
        budget: u64,
    },
    #[error("integer overflow in chip arithmetic")]
    Overflow,
    #[error("{0} did not finish within its iteration ceiling")]
    IterationCeiling(&'static str),
    #[error("{0} stalled: the Dhar set is empty")]
    Stalled(&'static str),
    #[error("no {0} found in a class that must contain one")]
    NoRepresentative(&'static str),
}

impl Error {
    /// Resource errors (budget, overflow, ceilings) as opposed to domain errors.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::Overflow | Error::IterationCeiling(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
