use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the numerical core.
///
/// [`Error::is_numerical`] separates failures of the mathematics (degenerate
/// variance, singular regressions, normalisation by zero) from plain contract
/// violations on the inputs.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value at row {row}, column `{column}`")]
    NonFinite { row: usize, column: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("group label error: {0}")]
    Label(String),

    #[error("feature `{feature}` has zero variance")]
    DegenerateVariance { feature: String },

    #[error("rank-deficient regression: {rows} rows for {params} parameters")]
    RankDeficient { rows: usize, params: usize },

    #[error("exact enumeration supports at most {max} features, got {features}; use the tree algorithm")]
    EnumerationGuard { features: usize, max: usize },

    #[error("feature `{feature}` is constant; cannot build an evaluation grid")]
    DegenerateGrid { feature: String },

    #[error("fitting n_trees = {n_trees}, learning_rate = {learning_rate} failed: {source}")]
    Tuning {
        n_trees: usize,
        learning_rate: f64,
        source: alloc::boxed::Box<Error>,
    },

    #[error("importance normalisation failed in scope `{scope}`: all attributions are zero")]
    Normalization { scope: String },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of the numerics rather than of the input contract.
    pub fn is_numerical(&self) -> bool {
        if let Error::Tuning { source, .. } = self {
            return source.is_numerical();
        }
        matches!(
            self,
            Error::DegenerateVariance { .. }
                | Error::RankDeficient { .. }
                | Error::Normalization { .. }
                | Error::DegenerateGrid { .. }
        )
    }
}
