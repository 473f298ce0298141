use std::path::PathBuf;

/// Crate-wide error type. Variants are grouped by how the CLI reports them:
/// validation and hypothesis failures exit with 2, scale refusals with 3,
/// everything else with 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus {q} is even; the Jacobi symbol needs an odd modulus")]
    EvenModulus { q: u64 },

    #[error("no prime in ({lo}, {hi}]")]
    NoPrimeInInterval { lo: f64, hi: f64 },

    #[error("modulus {q} exceeds the cap {cap} for this evaluation mode")]
    ModulusTooLarge { q: u64, cap: u64 },

    #[error("{what}: {detail}")]
    InvalidInput { what: &'static str, detail: String },

    #[error("cannot place {j} points with spacing {h} below modulus {q}")]
    InfeasibleSpacing { q: u64, h: u64, j: u64 },

    #[error("brute-force count refused: n^2*|S|^2 = {work} exceeds {cap}")]
    OracleTooLarge { work: u128, cap: u128 },

    #[error("computation refused: estimated work {work} exceeds {cap}")]
    ScaleExceeded { work: u128, cap: u128 },

    #[error("embedded points collide at index {index}; spacing precondition violated")]
    EmbeddingCollision { index: usize },

    #[error("H = {h} must exceed q^(1/2r) = {threshold:.3} for q = {q}, r = {r}")]
    HTooSmall { q: u64, h: u64, r: u32, threshold: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config {path}: {detail}")]
    Config { path: PathBuf, detail: String },
}

impl Error {
    /// Process exit code the CLI maps this error onto.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EvenModulus { .. }
            | Error::NoPrimeInInterval { .. }
            | Error::InvalidInput { .. }
            | Error::InfeasibleSpacing { .. }
            | Error::EmbeddingCollision { .. }
            | Error::HTooSmall { .. }
            | Error::HypothesisViolated(_) => 2,
            Error::ModulusTooLarge { .. }
            | Error::OracleTooLarge { .. }
            | Error::ScaleExceeded { .. } => 3,
            Error::Io { .. } | Error::Config { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
