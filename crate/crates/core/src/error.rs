use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("polynomial is inseparable (discriminant 0)")]
    Inseparable,
    #[error("polynomial is reducible over Q")]
    ProvablyReducible,
    #[error("degree must be at least 2")]
    DegreeTooSmall,
    #[error("Z[theta] is not {p}-maximal and no integral basis was supplied")]
    NotPMaximal { p: u64 },
    #[error("polynomial is not squarefree modulo {p}")]
    NotSquarefree { p: u64 },
    #[error("unsupported prime {p}: {reason}")]
    UnsupportedP { p: u64, reason: &'static str },
    #[error("element is not a unit at the prime {index} above {p}")]
    NotUnitAtQ { p: u64, index: usize },
    #[error("bad norm: {0}")]
    BadNorm(String),
    #[error("fixture schema error: {0}")]
    SchemaError(String),
    #[error("fixture checksum mismatch (expected {expected}, got {actual})")]
    ChecksumMismatch { expected: String, actual: String },
    #[error("modulus and S are not coprime")]
    NotCoprime,
    #[error("modulus {0} exceeds the supported range")]
    ModulusTooLarge(u64),
    #[error("v0 is not in S")]
    V0NotInS,
    #[error("Mackey functor axiom violated: {0}")]
    AxiomViolation(String),
    #[error("lattice basis is linearly dependent")]
    DependentInput,
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
