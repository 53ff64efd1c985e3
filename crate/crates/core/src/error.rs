use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid setup: {0}")]
    InvalidSetup(String),
    #[error("unsupported degree regime: {0}")]
    UnsupportedDegreeRegime(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant in u")]
    ConstantInU,
    #[error("degree bound violated: {0}")]
    DegreeBound(String),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("invalid ledger entry: {0}")]
    InvalidLedger(String),
    #[error("not in the nilpotent cone")]
    NotNilpotent,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// An internal cross-check between two independent computations failed.
    #[error("{0}")]
    Assertion(String),
}

impl Error {
    /// True for failures of internal identities or oracles, as opposed to
    /// rejected inputs.
    pub fn is_assertion(&self) -> bool {
        matches!(self, Error::Assertion(_))
    }
}
