use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported cyclotomic order {0}; expected 3, 8 or 9")]
    UnsupportedRing(u32),
    #[error("ring mismatch: Z[zeta_{left}] vs Z[zeta_{right}]")]
    SpecMismatch { left: u32, right: u32 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("element is not divisible by chi")]
    NotDivisible,
    #[error("the chi-adic valuation of zero is undefined")]
    ZeroValuation,
    #[error("element is not fixed by complex conjugation")]
    NotReal,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("matrix is not a signed monomial matrix")]
    NotMonomial,
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("monomial table has no word for this matrix (depth cap {0})")]
    TableIncomplete(usize),
    #[error("no k in 0..4 changes the sde by {0}")]
    NoSuchK(i32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("matrix is not of the form D1 H D2 P at sde 3")]
    NotSde3Form,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag, used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnsupportedRing(_) => "unsupported_ring",
            Error::SpecMismatch { .. } => "spec_mismatch",
            Error::DimMismatch { .. } => "dim_mismatch",
            Error::NotDivisible => "not_divisible",
            Error::ZeroValuation => "zero_valuation",
            Error::NotReal => "not_real",
            Error::Malformed(_) => "malformed",
            Error::Syntax { .. } => "syntax",
            Error::NotMonomial => "not_monomial",
            Error::NotUnitary => "not_unitary",
            Error::TableIncomplete(_) => "table_incomplete",
            Error::NoSuchK(_) => "no_such_k",
            Error::Precondition(_) => "precondition",
            Error::NotSde3Form => "not_sde3_form",
            Error::Inconsistent(_) => "inconsistent",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}
