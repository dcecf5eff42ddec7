use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution hits a pole: denominator {0} vanishes")]
    SpecializationPole(String),
    #[error("color signatures differ: {0} vs {1}")]
    SignatureMismatch(String, String),
    #[error("exact division failed: {0}")]
    InexactDivision(String),
    #[error("at most {cap} slots per color are supported, got {got}")]
    SignatureOverflow { cap: usize, got: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("leading word of the zero polynomial")]
    ZeroPolynomial,
    #[error("word {0} is not non-increasing")]
    NotNonIncreasing(String),
    #[error("pairing changed between truncation orders {lo} and {hi}")]
    TruncationUnstable { lo: usize, hi: usize },
    #[error("rational prefactor does not reduce to a Laurent polynomial: {0}")]
    NotALaurentPolynomial(String),
    #[error("straightening did not stabilise after {attempts} window doublings")]
    WindowExhausted { attempts: usize },
    #[error("too many variables for brute-force ordering search ({0} > 8)")]
    TooManyVariables(usize),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, column, message: message.into() }
    }

    pub(crate) fn config(line: usize, message: impl Into<String>) -> Self {
        Error::Config { line, message: message.into() }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::SpecializationPole(_) => "SpecializationPole",
            Error::SignatureMismatch(..) => "SignatureMismatch",
            Error::InexactDivision(_) => "InexactDivision",
            Error::SignatureOverflow { .. } => "SignatureOverflow",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::UnknownEdge(_) => "UnknownEdge",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::NotNonIncreasing(_) => "NotNonIncreasing",
            Error::TruncationUnstable { .. } => "TruncationUnstable",
            Error::NotALaurentPolynomial(_) => "NotALaurentPolynomial",
            Error::WindowExhausted { .. } => "WindowExhausted",
            Error::TooManyVariables(_) => "TooManyVariables",
            Error::Parse { .. } => "ParseError",
            Error::Config { .. } => "ConfigError",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
