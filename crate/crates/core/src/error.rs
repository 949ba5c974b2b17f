use thiserror::Error;

/// Errors raised by the kernel. Each variant names the module that failed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exact_linalg: shape error: {0}")]
    Shape(String),

    #[error("exact_linalg: induced map not well defined: {0}")]
    WellDefinedness(String),

    #[error("lie_core: Jacobi identity fails on {count} basis triple(s); first witness {witness}")]
    Jacobi { count: usize, witness: String },

    #[error("acs: {0}")]
    InvalidAcs(String),

    #[error("flag: {0}")]
    Flag(String),

    #[error("cohomology: precondition failed: {0}")]
    Precondition(String),

    #[error("homogeneous: {0}")]
    Homogeneous(String),

    /// An identity the mathematics guarantees did not hold; always an
    /// implementation bug.
    #[error("{module}: internal invariant violated: {detail}")]
    Internal { module: &'static str, detail: String },

    /// The (p,0) coincidence between transverse and generalized Dolbeault
    /// cohomology failed.
    #[error("cohomology: (p,0) coincidence violated: {0}")]
    TheoremViolation(String),

    #[error("catalog: unknown entry `{name}`; available: {available}")]
    UnknownCatalogEntry { name: String, available: String },

    #[error("schema: {0}")]
    Schema(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// True for errors describing invalid mathematical input (as opposed to
    /// schema/IO problems or internal bugs).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Jacobi { .. }
                | Error::InvalidAcs(_)
                | Error::Flag(_)
                | Error::Precondition(_)
                | Error::Homogeneous(_)
                | Error::Shape(_)
        )
    }

    /// Process exit status: 1 invalid input, 2 internal or theorem failure,
    /// 3 I/O, schema or lookup.
    pub fn exit_code(&self) -> i32 {
        match self {
            e if e.is_validation() => 1,
            Error::Internal { .. } | Error::TheoremViolation(_) | Error::WellDefinedness(_) => 2,
            _ => 3,
        }
    }

    pub fn internal(module: &'static str, detail: impl Into<String>) -> Self {
        Error::Internal {
            module,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
