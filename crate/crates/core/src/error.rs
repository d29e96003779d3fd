use thiserror::Error;

/// Errors shared across the library.
///
/// Resource-limit variants (`PermutationSetTooLarge`, `StateSpaceTooLarge`,
/// `BudgetExceeded`) are deliberately distinct from domain errors so callers
/// can map them to a dedicated exit status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty pattern")]
    EmptyPattern,

    #[error("letter {letter} out of range for alphabet [{d}]")]
    LetterOutOfRange { letter: u32, d: u32 },

    #[error("pattern needs more distinct letters than alphabet ({distinct} > {d})")]
    AlphabetTooSmall { distinct: usize, d: usize },

    #[error("permutation set too large (k = {k}, cap = {cap})")]
    PermutationSetTooLarge { k: usize, cap: usize },

    #[error("state space too large for exact solve (k = {k}, cap = {cap})")]
    StateSpaceTooLarge { k: usize, cap: usize },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid occurrence: {0}")]
    InvalidOccurrence(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node budget exceeded after {nodes} nodes (no length below {frontier} remains unrefuted)")]
    BudgetExceeded { nodes: u64, frontier: usize },

    #[error("cannot parse word: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
