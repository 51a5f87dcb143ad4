use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),

    #[error("invalid reconstruction parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch in {context}: {expected_width}x{expected_height} vs {actual_width}x{actual_height}")]
    DimensionMismatch {
        context: &'static str,
        expected_width: usize,
        expected_height: usize,
        actual_width: usize,
        actual_height: usize,
    },

    #[error("not a gradient event stream (bad magic)")]
    BadMagic,

    #[error("unsupported stream version {0}")]
    UnsupportedVersion(u16),

    #[error("truncated stream")]
    TruncatedStream,

    #[error("malformed stream header: {0}")]
    MalformedHeader(String),

    #[error("event record out of bounds: ({x},{y}) channel {channel} in a {width}x{height} stream")]
    RecordOutOfBounds {
        x: u16,
        y: u16,
        channel: u8,
        width: u16,
        height: u16,
    },

    #[error("malformed event record: {0}")]
    MalformedRecord(String),

    #[error("stream thresholds do not match the decoder threshold matrix")]
    ThresholdMismatch,

    #[error("non-finite Laplacian value at ({x},{y})")]
    NonFiniteLaplacian { x: usize, y: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(
        context: &'static str,
        expected: (usize, usize),
        actual: (usize, usize),
    ) -> Self {
        Error::DimensionMismatch {
            context,
            expected_width: expected.0,
            expected_height: expected.1,
            actual_width: actual.0,
            actual_height: actual.1,
        }
    }
}
