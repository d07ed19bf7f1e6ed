use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} issues, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("issue count {0} is outside 1..=64")]
    IssueCount(usize),

    #[error("value {bits:#x} does not fit in {len} issues")]
    BitsOutOfRange { bits: u64, len: usize },

    #[error("feasible set is empty")]
    EmptyFeasibleSet,

    #[error("feasible set would have {0} members, more than the supported maximum")]
    SpaceTooLarge(u128),

    #[error("invalid space generator: {0}")]
    InvalidGenerator(String),

    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),

    #[error("operation requires a {expected} space")]
    WrongSpaceKind { expected: &'static str },

    #[error("no consistent order: alternatives {cycle} form a cycle")]
    NoConsistentOrder { cycle: String },

    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    #[error("evaluation {0} is infeasible")]
    Infeasible(String),

    #[error("evaluation {0} is feasible")]
    Feasible(String),

    #[error("empty issue set")]
    EmptyIssueSet,

    #[error("{0} is not a MIPE of this space")]
    NotAMipe(String),

    #[error("weight of issue {issue} must be in 1..=2^32, got {weight}")]
    InvalidWeight { issue: usize, weight: u64 },

    #[error("invalid tie order: {0}")]
    InvalidTieOrder(String),

    #[error("not a nearest-neighbor selector: {point} -> {chosen}")]
    NotNearestSelector { point: String, chosen: String },

    #[error("arity mismatch: aggregator takes {expected} voters, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid issue rule: {0}")]
    InvalidRule(String),

    #[error("stage is not monotone on issue {issue}")]
    NotMonotone { issue: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid aggregator: {0}")]
    InvalidAggregator(String),

    #[error("search needs {needed} aggregator evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("witness is not from a nearest-neighbor corrected aggregator: {0}")]
    NotNnWitness(String),

    #[error("unknown suite '{0}'")]
    UnknownSuite(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
