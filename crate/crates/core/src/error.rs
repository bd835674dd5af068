//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or transforming fields.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("sequence is already normalized")]
    AlreadyNormalized,

    #[error("sequence is not normalized")]
    NotNormalized,

    #[error("channel {channel} value {value} outside physical range [{min}, {max}]")]
    OutOfRange {
        channel: usize,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("bad magic bytes, expected \"NWC1\"")]
    BadMagic,

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),

    #[error("truncated stream: expected {expected} bytes, got {got}")]
    TruncatedPayload { expected: usize, got: usize },

    #[error("non-finite value at flat index {0}")]
    NonFiniteValue(usize),

    #[error("grid {h}x{w} is not divisible by cell size {cell}; pad the input first")]
    PadRequired { h: usize, w: usize, cell: usize },

    #[error("wrong channel count: expected {expected}, got {got}")]
    WrongChannelCount { expected: usize, got: usize },

    #[error("grid {h}x{w} too small, need at least {min}x{min}")]
    GridTooSmall { h: usize, w: usize, min: usize },

    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("batch-norm variance for channel {0} must be positive")]
    NonPositiveVariance(usize),

    #[error("spatial dims {h}x{w} not divisible by 2^{depth}")]
    IndivisibleDims { h: usize, w: usize, depth: usize },

    #[error("no trace was captured for this forward pass")]
    NoTrace,

    #[error("index out of bounds: {0}")]
    OutOfBounds(String),

    #[error("temporal length {0} too small")]
    TTooSmall(usize),

    #[error("temporal length {0} must be even")]
    OddTemporalLength(usize),

    #[error("frame {h}x{w} smaller than the {window}x{window} window")]
    FrameTooSmall { h: usize, w: usize, window: usize },

    #[error("normalization flags differ between the two sequences")]
    NormalizationMismatch,

    #[error("wavelength band {0} contains no spectral bins on this grid")]
    EmptyBand(&'static str),

    #[error("spectra were computed on different bin axes")]
    AxisMismatch,

    #[error("retention base value is undefined or non-positive")]
    UndefinedBase,

    #[error("motion estimation needs at least two frames")]
    TooFewFrames,

    #[error("block size {block} exceeds grid {h}x{w}")]
    BlockTooLarge { block: usize, h: usize, w: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn shape_mismatch(left: impl std::fmt::Debug, right: impl std::fmt::Debug) -> Self {
        Error::ShapeMismatch {
            left: format!("{left:?}"),
            right: format!("{right:?}"),
        }
    }
}
