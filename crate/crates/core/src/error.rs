use thiserror::Error;

/// Errors raised by nomkit operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NomError {
    #[error("cross-sort swap: {0} and {1} have different sorts")]
    CrossSortSwap(String, String),
    #[error("swap of an atom with itself: ({0} {0}) is not a generator, write id")]
    TrivialSwap(String),
    #[error("undecidable agreement: shift powers {0} and {1} differ on an infinite region")]
    UndecidableAgreement(i64, i64),
    #[error("unrepresentable: {0}")]
    Unrepresentable(String),
    #[error("unrepresentable abstraction: residual support {0} is infinite")]
    UnrepresentableAbstraction(String),
    #[error("list not fresh for abstraction: {0}")]
    ListNotFresh(String),
    #[error("atoms(r) infinite under shift: {0}")]
    InfiniteAtoms(String),
    #[error("support union outside closed family: {0}")]
    UnionOutsideFamily(String),
    #[error("no fresh atom: {0}")]
    NoFreshAtom(String),
    #[error("ill-sorted: {0}")]
    Sort(String),
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("regime violation: {0}")]
    RegimeViolation(String),
    #[error("valuation family of size {size} exceeds cap {cap}")]
    FamilyTooLarge { size: usize, cap: usize },
    #[error("no quantification basis for sort {0}")]
    NoQuantBasis(String),
    #[error("π∘ς requires nontriv(π) ⊆ A<: {0}")]
    ShiftValuation(String),
    #[error("not an equivariant function: {0}")]
    NotEquivariant(String),
    #[error("unknown name: {0}")]
    Unbound(String),
    #[error("invalid list: {0}")]
    InvalidList(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

impl NomError {
    /// True for errors caused by malformed input text.
    pub fn is_parse(&self) -> bool {
        matches!(self, NomError::Parse { .. })
    }
}

pub type Result<T, E = NomError> = std::result::Result<T, E>;
