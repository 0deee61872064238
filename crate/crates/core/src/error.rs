//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by image operations, the solvers, noise synthesis, and
/// the metrics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Buffer construction with inconsistent geometry.
    #[error("invalid image geometry: {width}x{height} with {samples} samples")]
    BadGeometry {
        width: usize,
        height: usize,
        samples: usize,
    },

    /// A sample that must be finite is NaN or infinite.
    #[error("non-finite sample at index {index}: {value}")]
    NonFiniteSample { index: usize, value: f64 },

    /// Two buffers that must share dimensions do not.
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    /// A scalar parameter is outside its documented domain.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: String,
    },

    /// Zero-gradient pixel with a zero regularizer: the gradient-normalized
    /// denominator vanishes.
    #[error("singular gradient: zero gradient with zero regularizer at pixel index {0}")]
    SingularGradient(usize),

    /// Image below the minimum size the phase-congruency filter bank
    /// supports for the configured minimum wavelength.
    #[error(
        "image {width}x{height} too small for phase congruency \
         (needs at least {min_side}x{min_side} for min_wavelength {min_wavelength})"
    )]
    ImageTooSmallForPc {
        width: usize,
        height: usize,
        min_side: usize,
        min_wavelength: f64,
    },

    /// Speckle calibration is undefined on an all-zero image.
    #[error("speckle calibration failed: mean squared intensity is zero")]
    SpeckleCalibration,

    /// Requested noise variance cannot be realized on this image.
    #[error("noise variance target {target} is unreachable (maximum achievable {max})")]
    UnreachableVariance { target: f64, max: f64 },

    /// SNR denominator is zero because the two images are identical.
    #[error("SNR undefined: images are identical (zero error energy)")]
    IdenticalImages,
}
