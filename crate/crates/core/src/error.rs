//! Error type shared by all modules of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("network must have at least one node")]
    EmptyNetwork,

    #[error("dissimilarity matrix is not square: {labels} labels, row {row} has {cols} entries")]
    NonSquare { labels: usize, row: usize, cols: usize },

    #[error("duplicate node label {0:?}")]
    DuplicateLabel(String),

    #[error("negative dissimilarity {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("non-finite dissimilarity at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("diagonal entry ({index}, {index}) must be zero, found {value}")]
    NonZeroDiagonal { index: usize, value: f64 },

    #[error("off-diagonal dissimilarity at ({row}, {col}) must be positive")]
    ZeroOffDiagonal { row: usize, col: usize },

    #[error("input is asymmetric at ({row}, {col}); single linkage requires symmetric data")]
    AsymmetricInput { row: usize, col: usize },

    #[error("unknown clustering method {0:?}")]
    UnknownMethod(String),

    #[error(
        "strong triangle inequality fails at ({i}, {j}, {k}): \
         u({i},{j}) > max(u({i},{k}), u({k},{j}))"
    )]
    NotUltrametric { i: usize, j: usize, k: usize },

    #[error("invalid dendrogram: {0}")]
    InvalidDendrogram(String),

    #[error("network has {nodes} nodes, exceeding the enumeration bound of {bound}")]
    TooLarge { nodes: usize, bound: usize },

    #[error("label sets do not match")]
    LabelMismatch,

    #[error("map increases the dissimilarity of pair ({row}, {col})")]
    DissimilarityIncreasing { row: usize, col: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("edge list contains no usable directed edges")]
    EmptyEdgeList,

    #[error("format {format:?} is not supported for {object}")]
    UnsupportedFormat { format: String, object: &'static str },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Attach a 1-based input line number to a validation error.
    pub(crate) fn at_line(self, line: usize) -> Error {
        Error::AtLine { line, source: Box::new(self) }
    }
}
