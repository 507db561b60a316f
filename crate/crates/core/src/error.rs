use thiserror::Error;

/// Errors raised by the algebra and checker layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in the scalar field")]
    ZeroInverse,

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("polynomial is not multilinear")]
    NonMultilinear,

    #[error("polynomial is not multihomogeneous")]
    NonMultihomogeneous,

    #[error("variable x{index} is used with two different degrees")]
    VariableDegreeClash { index: u32 },

    #[error("Grassmann budget exceeded: {needed} generators needed, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("map is not a group homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("grading tuple is not of the form (0,...,0,1,...,1)")]
    TupleNotSorted,

    #[error("substitution for {var} is not admissible: expected a homogeneous element of degree {expected}")]
    NotAdmissible { var: String, expected: String },

    #[error("scalar field Q(zeta_{conductor}) has no primitive {m}-th root of unity")]
    ConductorMismatch { conductor: u32, m: u32 },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown group element `{0}`")]
    UnknownGroupElement(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid bicharacter: {0}")]
    InvalidBicharacter(String),

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
