use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("name `{0}` is reserved for the zero element")]
    ReservedName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("invalid name `{0}`")]
    BadName(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("conflicting transitions {state}·{letter} = {first} and {second}")]
    ConflictingTransition { state: String, letter: String, first: String, second: String },
    #[error("index out of range")]
    IndexOutOfRange,
    #[error("unknown catalog algebra `{0}`")]
    UnknownName(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PowerError {
    #[error("index {0} given twice")]
    DuplicateIndex(usize),
    #[error("index {index} out of range for power of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("{what} has {size} elements, above the cap of {cap}")]
    CapExceeded { what: String, size: usize, cap: usize },
    #[error("precondition for `{name}` violated: {reason}")]
    PreconditionViolated { name: String, reason: String },
    #[error("operation `{0}` produced a non-compatible graph")]
    NotCompatible(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("letter `{0}` does not act as a permutation")]
    NotPermutational(String),
    #[error("letters `{0}` and `{1}` do not commute")]
    NotCommuting(String, String),
    #[error("states `{0}` and `{1}` are not connected by the letter action")]
    NotTransitive(String, String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not an abelian group: {0}")]
    NotAbelian(String),
    #[error("exponent {exponent} does not divide {m}")]
    ExponentMismatch { exponent: usize, m: usize },
    #[error("element index {0} is not in the group")]
    NotAnElement(usize),
    #[error("construction failed self-check: {0}")]
    ConstructionFailed(String),
    #[error("row set is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("hypothesis `{which}` fails at {witness}")]
    HypothesisFailed { which: String, witness: String },
    #[error("no zero column although all hypotheses hold")]
    PropositionViolated,
    #[error("group of order {0} exceeds the cap")]
    CapExceeded(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("unknown construction `{0}`")]
    UnknownConstruction(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("identity `{identity}` fails at {indices}")]
    ProofIdentityFailed { identity: String, indices: String },
    #[error("local evaluation check failed: {0}")]
    LocalEvaluationViolated(String),
    #[error(transparent)]
    Power(#[from] PowerError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Umbrella error with a stable mapping onto process exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Power(#[from] PowerError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

impl Error {
    /// 2 parse, 3 precondition, 4 internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Term(_) => 2,
            Error::Algebra(e) => match e {
                AlgebraError::UnknownName(_) | AlgebraError::BadParams(_) => 3,
                _ => 2,
            },
            Error::Structure(StructureError::InternalInconsistency(_))
            | Error::Classify(_)
            | Error::Group(GroupError::ConstructionFailed(_))
            | Error::Group(GroupError::PropositionViolated) => 4,
            Error::Witness(WitnessError::ProofIdentityFailed { .. })
            | Error::Witness(WitnessError::LocalEvaluationViolated(_))
            | Error::Witness(WitnessError::Structure(StructureError::InternalInconsistency(_))) => 4,
            Error::Power(PowerError::NotCompatible(_)) => 4,
            _ => 3,
        }
    }
}
