use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("precision shortfall: {required} coefficients required, {available} available")]
    Precision { required: usize, available: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("irreducibility undetermined for {poly}: no modular certificate and no rational root")]
    IrreducibilityUndetermined { poly: String },

    #[error("unexpected eigenspace dimension: kernel has dimension {found}, expected 1")]
    EigenspaceDimension { found: usize },

    #[error(
        "dimension mismatch in weight {two_k}/2: plus cusp space has dimension {found}, \
         level-one formula gives {expected}"
    )]
    DimensionMismatch { two_k: u32, found: usize, expected: usize },

    /// A mathematical certificate failed (repeated roots, Hecke image outside
    /// the span, lift discrepancy, eigenvalue pairing).
    #[error("certificate failure: {0}")]
    Certificate(String),

    #[error("normalization index undefined: a({index}) = 0")]
    NormalizationUndefined { index: u64 },

    #[error("model domain error: {0}")]
    Domain(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures of a mathematical certificate (dimension,
    /// irreducibility, eigenspace, lift), as opposed to bad input or I/O.
    pub fn is_certificate_failure(&self) -> bool {
        matches!(
            self,
            Error::IrreducibilityUndetermined { .. }
                | Error::EigenspaceDimension { .. }
                | Error::DimensionMismatch { .. }
                | Error::Certificate(_)
                | Error::NormalizationUndefined { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
