//! Error type shared by all core operations.

use core::fmt;

/// Errors reported by the core image operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// A requested dimension was zero or otherwise unusable.
    InvalidDimension { width: usize, height: usize },
    /// A raster buffer length does not match `width * height * channels`.
    BufferSizeMismatch { expected: usize, actual: usize },
    /// Channel count must be 1 (gray) or 3 (srgb / luma-chroma).
    InvalidChannelCount(usize),
    /// The operation requires a different color space.
    WrongColorSpace,
    /// A plane contained a NaN or infinite sample.
    NonFiniteSample,
    /// Kernel or window does not fit the image.
    KernelTooLarge {
        kernel: (usize, usize),
        image: (usize, usize),
    },
    /// Kernel dimensions must be odd (and at least the documented minimum).
    InvalidKernel(&'static str),
    /// A Gaussian sigma must be positive.
    InvalidSigma,
    /// NLM windows must be odd with template <= search.
    InvalidWindow(&'static str),
    /// A filtering strength must be positive.
    InvalidStrength,
    /// CLAHE parameters are out of range.
    InvalidClaheParams(&'static str),
    /// A CLAHE tile would be smaller than 2x2 pixels.
    GridTooFine {
        tile: (usize, usize),
    },
    /// The two rasters of a metric call differ in shape.
    ShapeMismatch {
        left: (usize, usize, usize),
        right: (usize, usize, usize),
    },
    /// The image is smaller than the metric window.
    ImageTooSmall {
        window: usize,
        image: (usize, usize),
    },
    /// NRMSE is undefined against an all-zero reference.
    ZeroReference,
    /// Noise parameters are out of range.
    InvalidNoiseParams(&'static str),
    /// The benchmark was handed no images.
    EmptyImageList,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension { width, height } => {
                write!(f, "invalid dimensions {width}x{height}")
            }
            Error::BufferSizeMismatch { expected, actual } => {
                write!(f, "sample buffer holds {actual} values, expected {expected}")
            }
            Error::InvalidChannelCount(c) => {
                write!(f, "channel count {c} unsupported (must be 1 or 3)")
            }
            Error::WrongColorSpace => write!(f, "operation not defined for this color space"),
            Error::NonFiniteSample => write!(f, "plane contains a non-finite sample"),
            Error::KernelTooLarge { kernel, image } => write!(
                f,
                "kernel {}x{} does not fit image {}x{}",
                kernel.0, kernel.1, image.0, image.1
            ),
            Error::InvalidKernel(msg) => write!(f, "invalid kernel: {msg}"),
            Error::InvalidSigma => write!(f, "sigma must be positive"),
            Error::InvalidWindow(msg) => write!(f, "invalid window: {msg}"),
            Error::InvalidStrength => write!(f, "filtering strength must be positive"),
            Error::InvalidClaheParams(msg) => write!(f, "invalid CLAHE parameters: {msg}"),
            Error::GridTooFine { tile } => write!(
                f,
                "tile grid too fine: tiles would be {}x{} pixels",
                tile.0, tile.1
            ),
            Error::ShapeMismatch { left, right } => write!(
                f,
                "shape mismatch: {}x{}x{} vs {}x{}x{}",
                left.0, left.1, left.2, right.0, right.1, right.2
            ),
            Error::ImageTooSmall { window, image } => write!(
                f,
                "image {}x{} smaller than {window}x{window} window",
                image.0, image.1
            ),
            Error::ZeroReference => write!(f, "reference image is all zero"),
            Error::InvalidNoiseParams(msg) => write!(f, "invalid noise parameters: {msg}"),
            Error::EmptyImageList => write!(f, "image list is empty"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
