use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("zero input where a unit was required")]
    ZeroInput,
    #[error("tau is a square in F")]
    TauIsSquare,
    #[error("element is not regular semisimple")]
    NotRegularSemisimple,
    #[error("characteristic polynomial outside the supported factorization class: {0}")]
    UnsupportedFactorization(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix")]
    Singular,
    #[error("degenerate pairing")]
    DegeneratePairing,
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("input violates a precondition: {0}")]
    Precondition(String),
    #[error("not certified within the configured radius: {0}")]
    NotCertified(String),
    #[error("different stable classes")]
    StableClassMismatch,
}
