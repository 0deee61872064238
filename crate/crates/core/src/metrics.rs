//! Image quality metrics: SNR in decibels, the three-factor SSIM index
//! map over 8×8 windows, and MSSIM.
//!
//! Two SNR conventions coexist deliberately:
//!
//! - [`snr_db`] — `10·log₁₀(Σu² / Σ(u − clean)²)`, the signal-energy form
//!   used by the experiment harness and the acceptance anchors.
//! - [`snr_centered_db`] — `10·log₁₀(Σ(u − μ(u))² / Σ(u − clean)²)`, the
//!   variance-over-error form; invariant under adding one constant to both
//!   images.
//!
//! SSIM follows the three-factor form with stabilizers `c₁ = (0.01·L)²`,
//! `c₂ = (0.03·L)²`, `c₃ = c₂/2` for dynamic range `L` (255 for 8-bit
//! data; pass `L = 1` for unit-scaled buffers — both SNR forms and SSIM
//! are invariant when values and `L` are scaled together). MSSIM is the
//! mean of the *squared* per-pixel SSIM values; [`mssim_plain`] exposes
//! the conventional unsquared mean for cross-checks.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::ImageBuffer;

/// SSIM window side; windows are anchored with their top-left corner at
/// the output pixel and replicate-padded past the right/bottom borders,
/// so the index map has the same dimensions as the inputs.
const WINDOW: usize = 8;
const WINDOW_AREA: f64 = (WINDOW * WINDOW) as f64;

/// Default dynamic range: 8 bits per sample.
pub const DYNAMIC_RANGE_8BIT: f64 = 255.0;

/// Summary quality report for one (image, reference) pair.
#[derive(Debug, Clone)]
pub struct MetricsReport {
    /// Signal-energy SNR in decibels.
    pub snr_db: f64,
    /// Mean of squared per-pixel SSIM values, in [0, 1].
    pub mssim: f64,
    /// Per-pixel SSIM index map, values in [−1, 1].
    pub ssim_map: ImageBuffer,
}

impl MetricsReport {
    /// Computes all metrics of `u` against `clean` at dynamic range `l`.
    pub fn compute(u: &ImageBuffer, clean: &ImageBuffer, l: f64) -> Result<Self> {
        let map = ssim_map_with_range(u, clean, l)?;
        Ok(Self {
            snr_db: snr_db(u, clean)?,
            mssim: mean_of_squares(&map),
            ssim_map: map,
        })
    }
}

fn error_energy(u: &ImageBuffer, clean: &ImageBuffer) -> Result<f64> {
    u.same_dims(clean)?;
    let denom: f64 = u
        .as_slice()
        .iter()
        .zip(clean.as_slice())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum();
    if denom == 0.0 {
        return Err(Error::IdenticalImages);
    }
    Ok(denom)
}

/// Signal-energy SNR: `10·log₁₀(Σu² / Σ(u − clean)²)`.
///
/// Errors when the images are identical (zero error energy). An all-zero
/// `u` against a different `clean` yields −∞ (zero numerator), which is
/// reported as the IEEE value rather than an error.
pub fn snr_db(u: &ImageBuffer, clean: &ImageBuffer) -> Result<f64> {
    let denom = error_energy(u, clean)?;
    let num: f64 = u.as_slice().iter().map(|&a| a * a).sum();
    Ok(10.0 * (num / denom).log10())
}

/// Variance-over-error SNR: `10·log₁₀(Σ(u − μ(u))² / Σ(u − clean)²)`.
///
/// The numerator is the variance of the *denoised* image about its own
/// mean, making the value invariant under adding the same constant to
/// both images. A constant `u` different from `clean` yields −∞.
pub fn snr_centered_db(u: &ImageBuffer, clean: &ImageBuffer) -> Result<f64> {
    let denom = error_energy(u, clean)?;
    let mu = u.mean();
    let num: f64 = u.as_slice().iter().map(|&a| (a - mu) * (a - mu)).sum();
    Ok(10.0 * (num / denom).log10())
}

/// Per-pixel SSIM index map at the 8-bit dynamic range (L = 255).
pub fn ssim_map(u: &ImageBuffer, clean: &ImageBuffer) -> Result<ImageBuffer> {
    ssim_map_with_range(u, clean, DYNAMIC_RANGE_8BIT)
}

/// Per-pixel SSIM index map for dynamic range `l`.
///
/// Each output pixel is the product of luminance, contrast, and structure
/// terms computed from uniform (unweighted) 8×8 window statistics with
/// population normalization. Values are clamped to [−1, 1]: rounding can
/// push the covariance an ulp past the Cauchy–Schwarz bound, and the
/// documented range is a contract.
pub fn ssim_map_with_range(u: &ImageBuffer, clean: &ImageBuffer, l: f64) -> Result<ImageBuffer> {
    u.same_dims(clean)?;
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::InvalidParameter {
            name: "dynamic_range",
            reason: format!("must be finite and > 0, got {l}"),
        });
    }

    let c1 = (0.01 * l) * (0.01 * l);
    let c2 = (0.03 * l) * (0.03 * l);
    let c3 = c2 / 2.0;

    let (w, h) = u.dims();
    let a = u.as_slice();
    let b = clean.as_slice();
    let mut out = vec![0.0; w * h];

    out.par_chunks_mut(w).enumerate().for_each(|(y, row_out)| {
        for (x, out_px) in row_out.iter_mut().enumerate() {
            // First pass: window means (replicate extension to the
            // right/bottom via index clamping).
            let mut sum_a = 0.0;
            let mut sum_b = 0.0;
            for dy in 0..WINDOW {
                let yy = (y + dy).min(h - 1);
                let row_off = yy * w;
                for dx in 0..WINDOW {
                    let xx = (x + dx).min(w - 1);
                    sum_a += a[row_off + xx];
                    sum_b += b[row_off + xx];
                }
            }
            let mu_a = sum_a / WINDOW_AREA;
            let mu_b = sum_b / WINDOW_AREA;

            // Second pass: central moments. Sums of squares keep the
            // variances nonnegative, and identical inputs produce
            // bit-identical variance and covariance, which makes
            // SSIM(u, u) exactly 1.
            let mut var_a = 0.0;
            let mut var_b = 0.0;
            let mut cov = 0.0;
            for dy in 0..WINDOW {
                let yy = (y + dy).min(h - 1);
                let row_off = yy * w;
                for dx in 0..WINDOW {
                    let xx = (x + dx).min(w - 1);
                    let da = a[row_off + xx] - mu_a;
                    let db = b[row_off + xx] - mu_b;
                    var_a += da * da;
                    var_b += db * db;
                    cov += da * db;
                }
            }
            var_a /= WINDOW_AREA;
            var_b /= WINDOW_AREA;
            cov /= WINDOW_AREA;

            // σ_a·σ_b as √(var_a·var_b): bit-equal to the variance when
            // the windows are identical.
            let sigma_ab = (var_a * var_b).sqrt();

            let luminance = (2.0 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1);
            let contrast = (2.0 * sigma_ab + c2) / (var_a + var_b + c2);
            let structure = (cov + c3) / (sigma_ab + c3);

            *out_px = (luminance * contrast * structure).clamp(-1.0, 1.0);
        }
    });

    Ok(ImageBuffer::from_raw(w, h, out))
}

fn mean_of_squares(map: &ImageBuffer) -> f64 {
    map.as_slice().iter().map(|&v| v * v).sum::<f64>() / map.len() as f64
}

/// MSSIM at the 8-bit dynamic range: mean of squared SSIM values.
pub fn mssim(u: &ImageBuffer, clean: &ImageBuffer) -> Result<f64> {
    mssim_with_range(u, clean, DYNAMIC_RANGE_8BIT)
}

/// MSSIM for dynamic range `l`: `(1/M)·Σⱼ SSIM(j)²`.
pub fn mssim_with_range(u: &ImageBuffer, clean: &ImageBuffer, l: f64) -> Result<f64> {
    Ok(mean_of_squares(&ssim_map_with_range(u, clean, l)?))
}

/// Conventional unsquared MSSIM (compatibility cross-check):
/// `(1/M)·Σⱼ SSIM(j)`.
pub fn mssim_plain(u: &ImageBuffer, clean: &ImageBuffer, l: f64) -> Result<f64> {
    let map = ssim_map_with_range(u, clean, l)?;
    Ok(map.as_slice().iter().sum::<f64>() / map.len() as f64)
}

/// Pointwise difference of two SSIM maps (`map_a − map_b`); positive
/// where the first map is better.
pub fn ssim_diff(map_a: &ImageBuffer, map_b: &ImageBuffer) -> Result<ImageBuffer> {
    map_a.same_dims(map_b)?;
    let samples = map_a
        .as_slice()
        .iter()
        .zip(map_b.as_slice())
        .map(|(&a, &b)| a - b)
        .collect();
    Ok(ImageBuffer::from_raw(map_a.width(), map_a.height(), samples))
}
