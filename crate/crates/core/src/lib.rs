//! Grayscale image denoising by total-variation (TV) diffusion and its
//! phase-congruency-modulated variant (MPC-TV).
//!
//! The crate is organized around a handful of small modules:
//!
//! - [`image`]: real-valued image buffers, finite-difference derivatives,
//!   the regularized gradient magnitude and edge-direction second
//!   derivative, and the 3×3 median filter.
//! - [`fft`]: plan-cached 2-D FFT support for the frequency-domain filters.
//! - [`phase_congruency`]: oriented phase-congruency maps from a log-Gabor
//!   filter bank, the covariance moment fields, the maximum moment M, and
//!   the diffusion adjust factor g = (1 − M_norm)^m.
//! - [`solver`]: the explicit-Euler TV iteration, the MPC-TV iteration
//!   (PC-modulated diffusion plus a median fusion filter), and the TV
//!   energy functional.
//! - [`noise`]: seeded, order-independent Gaussian / speckle /
//!   salt-and-pepper noise synthesis.
//! - [`metrics`]: SNR, the three-factor SSIM index map over 8×8 windows,
//!   and MSSIM.
//!
//! All operations are deterministic: identical inputs produce bit-identical
//! outputs regardless of thread count.

pub mod error;
pub mod fft;
pub mod image;
pub mod metrics;
pub mod noise;
pub mod phase_congruency;
pub mod solver;

pub use error::{Error, Result};
pub use image::{DerivativeSet, Eps, ImageBuffer};
