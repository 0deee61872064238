//! Oriented phase congruency from a frequency-domain log-Gabor filter
//! bank, the covariance moment fields, the maximum moment M, and the
//! diffusion adjust factor g.
//!
//! Phase congruency marks pixels where the Fourier components of the image
//! are maximally in phase; unlike gradient magnitude it is (largely)
//! invariant to image contrast. Each orientation is analyzed with a bank
//! of quadrature log-Gabor filters spanning several scales; local energy
//! is normalized by the summed amplitude and compensated for the expected
//! response to noise, estimated from the smallest-scale amplitude under a
//! Rayleigh model.
//!
//! The per-orientation maps feed the moment fields
//! `a = Σ(PC(θ)cosθ)²`, `b = 2·Σ(PC(θ)cosθ·PC(θ)sinθ)`,
//! `c = Σ(PC(θ)sinθ)²`, whose maximum eigen-moment
//! `M = ½(c + a + √(b² + (a−c)²))` peaks on significant edges regardless
//! of their orientation. `M` is min-max normalized to `M_norm`, and the
//! adjust factor `g = (1 − M_norm)^m` then scales the diffusion rate of
//! the MPC-TV solver: 1 in featureless regions, 0 on the strongest edge.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use rayon::prelude::*;
use rustfft::num_complex::Complex;

use crate::error::{Error, Result};
use crate::fft;
use crate::image::ImageBuffer;

/// Small constant guarding divisions by summed amplitudes and energies.
const EPSILON: f64 = 1e-4;

/// Sigmoid weighting of the filter-response spread: fractional spread at
/// which the weight is 0.5, and the sigmoid gain.
const SPREAD_CUTOFF: f64 = 0.5;
const SPREAD_GAIN: f64 = 10.0;

/// Ratio of the angular interval between filter orientations to the
/// angular standard deviation of the spread function.
const D_THETA_ON_SIGMA: f64 = 1.3;

/// Butterworth lowpass applied to every radial filter (normalized cutoff
/// frequency and order): suppresses the highest frequencies where the
/// log-Gabor tail would alias.
const LOWPASS_CUTOFF: f64 = 0.45;
const LOWPASS_ORDER: f64 = 15.0;

/// Log-Gabor filter-bank configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PCParams {
    /// Number of filter orientations over [0, π).
    pub orientation_count: usize,
    /// Number of filter scales per orientation.
    pub scale_count: usize,
    /// Wavelength of the smallest-scale filter, in pixels.
    pub min_wavelength: f64,
    /// Ratio between the wavelengths of successive scales.
    pub scale_multiplier: f64,
    /// Log-Gabor bandwidth parameter (σ of the log-frequency Gaussian over
    /// the center frequency).
    pub sigma_on_f: f64,
    /// Noise compensation: threshold k standard deviations above the
    /// estimated mean noise energy.
    pub noise_threshold_k: f64,
}

impl Default for PCParams {
    fn default() -> Self {
        Self {
            orientation_count: 6,
            scale_count: 4,
            min_wavelength: 3.0,
            scale_multiplier: 2.1,
            sigma_on_f: 0.55,
            noise_threshold_k: 2.0,
        }
    }
}

impl PCParams {
    /// Validates the documented parameter domains.
    pub fn validate(&self) -> Result<()> {
        fn bad(name: &'static str, reason: String) -> Error {
            Error::InvalidParameter { name, reason }
        }
        if self.orientation_count < 1 {
            return Err(bad("orientation_count", "must be >= 1".into()));
        }
        if self.scale_count < 1 {
            return Err(bad("scale_count", "must be >= 1".into()));
        }
        if !(self.min_wavelength >= 2.0) {
            return Err(bad(
                "min_wavelength",
                format!("must be >= 2 pixels, got {}", self.min_wavelength),
            ));
        }
        if !(self.scale_multiplier > 0.0) {
            return Err(bad(
                "scale_multiplier",
                format!("must be > 0, got {}", self.scale_multiplier),
            ));
        }
        if !(self.sigma_on_f > 0.0) || self.sigma_on_f == 1.0 {
            return Err(bad(
                "sigma_on_f",
                format!("must be > 0 and != 1, got {}", self.sigma_on_f),
            ));
        }
        if !(self.noise_threshold_k >= 0.0) {
            return Err(bad(
                "noise_threshold_k",
                format!("must be >= 0, got {}", self.noise_threshold_k),
            ));
        }
        Ok(())
    }

    /// Filter orientations in radians: o·π/count for o = 0..count.
    pub fn orientation_angles(&self) -> Vec<f64> {
        (0..self.orientation_count)
            .map(|o| o as f64 * PI / self.orientation_count as f64)
            .collect()
    }

    /// Smallest image side the filter bank supports: below 16 pixels the
    /// bank has essentially no spectral support, and the smallest-scale
    /// wavelength needs at least two samples per period.
    pub fn min_image_side(&self) -> usize {
        (2.0 * self.min_wavelength).ceil().max(16.0) as usize
    }

    fn check_image(&self, u: &ImageBuffer) -> Result<()> {
        let min_side = self.min_image_side();
        if u.width() < min_side || u.height() < min_side {
            return Err(Error::ImageTooSmallForPc {
                width: u.width(),
                height: u.height(),
                min_side,
                min_wavelength: self.min_wavelength,
            });
        }
        Ok(())
    }
}

/// Full phase-congruency analysis of one image.
#[derive(Debug, Clone)]
pub struct PCResult {
    /// One phase-congruency map per orientation, values in [0, 1].
    pub pc_maps: Vec<ImageBuffer>,
    /// Moment field Σ(PC(θ)cosθ)².
    pub a: ImageBuffer,
    /// Moment field 2·Σ(PC(θ)cosθ·PC(θ)sinθ).
    pub b: ImageBuffer,
    /// Moment field Σ(PC(θ)sinθ)².
    pub c: ImageBuffer,
    /// Maximum moment ½(c + a + √(b² + (a−c)²)).
    pub m: ImageBuffer,
    /// M min-max normalized to [0, 1] (0 everywhere when M is constant).
    pub m_norm: ImageBuffer,
}

/// Precomputed frequency-domain filters for one (dimensions, params) pair.
struct FilterBank {
    /// Per-scale radial log-Gabor components (lowpassed, DC zeroed).
    radial: Vec<Vec<f64>>,
    /// Per-orientation angular spread components.
    spread: Vec<Vec<f64>>,
}

/// Cache key: dimensions plus the bank-shaping parameters (bit patterns of
/// the float fields; the noise threshold does not shape the bank).
type BankKey = (usize, usize, usize, usize, u64, u64, u64);

static BANK_CACHE: Lazy<Mutex<HashMap<BankKey, Arc<FilterBank>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Largest number of banks kept; sweeps touch only a handful of sizes.
const BANK_CACHE_CAP: usize = 8;

fn filter_bank(width: usize, height: usize, params: &PCParams) -> Arc<FilterBank> {
    let key: BankKey = (
        width,
        height,
        params.orientation_count,
        params.scale_count,
        params.min_wavelength.to_bits(),
        params.scale_multiplier.to_bits(),
        params.sigma_on_f.to_bits(),
    );
    let mut cache = BANK_CACHE.lock().expect("filter bank cache lock poisoned");
    if let Some(bank) = cache.get(&key) {
        return Arc::clone(bank);
    }
    let bank = Arc::new(build_filter_bank(width, height, params));
    if cache.len() >= BANK_CACHE_CAP {
        cache.clear();
    }
    cache.insert(key, Arc::clone(&bank));
    bank
}

/// Normalized frequency coordinates along one axis, centered, covering
/// [-0.5, 0.5]: even lengths divide by n, odd lengths by n − 1.
fn freq_axis(n: usize) -> Vec<f64> {
    if n % 2 == 0 {
        (0..n)
            .map(|i| (i as f64 - n as f64 / 2.0) / n as f64)
            .collect()
    } else {
        (0..n)
            .map(|i| (i as f64 - (n as f64 - 1.0) / 2.0) / (n as f64 - 1.0))
            .collect()
    }
}

/// Index of the centered-grid element that lands at position `i` after the
/// inverse FFT shift (moving the zero-frequency bin to index 0).
#[inline]
fn ifftshift_src(i: usize, n: usize) -> usize {
    (i + n / 2) % n
}

fn build_filter_bank(width: usize, height: usize, params: &PCParams) -> FilterBank {
    let fx = freq_axis(width);
    let fy = freq_axis(height);

    // Radius and polar angle on the unshifted (DC at index 0) grid.
    let n = width * height;
    let mut radius = vec![0.0; n];
    let mut sin_theta = vec![0.0; n];
    let mut cos_theta = vec![0.0; n];
    for y in 0..height {
        let sy = ifftshift_src(y, height);
        for x in 0..width {
            let sx = ifftshift_src(x, width);
            let (u, v) = (fx[sx], fy[sy]);
            let r = (u * u + v * v).sqrt();
            let idx = y * width + x;
            radius[idx] = r;
            // Polar angle with y negated so angles increase anticlockwise.
            let theta = (-v).atan2(u);
            sin_theta[idx] = theta.sin();
            cos_theta[idx] = theta.cos();
        }
    }

    // Butterworth lowpass shared by all scales; DC passes at gain 1.
    let lowpass: Vec<f64> = radius
        .iter()
        .map(|&r| 1.0 / (1.0 + (r / LOWPASS_CUTOFF).powf(2.0 * LOWPASS_ORDER)))
        .collect();

    let log_sigma = params.sigma_on_f.ln();
    let denom = 2.0 * log_sigma * log_sigma;
    let radial = (0..params.scale_count)
        .map(|s| {
            let wavelength = params.min_wavelength * params.scale_multiplier.powi(s as i32);
            let f0 = 1.0 / wavelength;
            radius
                .iter()
                .zip(&lowpass)
                .enumerate()
                .map(|(idx, (&r, &lp))| {
                    if idx == 0 {
                        // DC gain is exactly zero for a log-Gabor filter.
                        0.0
                    } else {
                        let lr = (r / f0).ln();
                        (-(lr * lr) / denom).exp() * lp
                    }
                })
                .collect()
        })
        .collect();

    let theta_sigma = PI / params.orientation_count as f64 / D_THETA_ON_SIGMA;
    let spread_denom = 2.0 * theta_sigma * theta_sigma;
    let spread = params
        .orientation_angles()
        .iter()
        .map(|&angle| {
            let (sin_a, cos_a) = angle.sin_cos();
            (0..n)
                .map(|idx| {
                    // Angular distance between the grid angle and the filter
                    // orientation, by rotating the (cos, sin) frame.
                    let ds = sin_theta[idx] * cos_a - cos_theta[idx] * sin_a;
                    let dc = cos_theta[idx] * cos_a + sin_theta[idx] * sin_a;
                    let d_theta = ds.atan2(dc).abs();
                    (-(d_theta * d_theta) / spread_denom).exp()
                })
                .collect()
        })
        .collect();

    FilterBank { radial, spread }
}

/// Exact median; for even counts, the mean of the two middle values.
fn median(values: &mut [f64]) -> f64 {
    let n = values.len();
    assert!(n > 0);
    let (_, upper_mid, _) =
        values.select_nth_unstable_by(n / 2, |a, b| a.partial_cmp(b).unwrap());
    let upper_mid = *upper_mid;
    if n % 2 == 1 {
        upper_mid
    } else {
        let lower_mid = values[..n / 2]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower_mid + upper_mid)
    }
}

/// Oriented phase-congruency maps, one per orientation angle, values in
/// [0, 1].
///
/// For each orientation, quadrature log-Gabor responses are accumulated
/// over scales; phase congruency is the noise-compensated local energy
/// divided by the total amplitude, weighted by a sigmoid of the filter
/// response spread so that congruency over a narrow frequency range does
/// not register.
pub fn oriented_pc(u: &ImageBuffer, params: &PCParams) -> Result<Vec<ImageBuffer>> {
    params.validate()?;
    params.check_image(u)?;

    let (w, h) = u.dims();
    let n = w * h;
    let mut image_fft = fft::to_complex(u);
    fft::fft2(&mut image_fft, w, h);

    let bank = filter_bank(w, h, params);
    let nscale = params.scale_count;

    // Orientations are independent; parallel evaluation collects in
    // orientation order, so the result does not depend on scheduling.
    let maps: Vec<ImageBuffer> = (0..params.orientation_count)
        .into_par_iter()
        .map(|o| {
            let spread = &bank.spread[o];
            let mut sum_e = vec![0.0; n];
            let mut sum_o = vec![0.0; n];
            let mut sum_an = vec![0.0; n];
            let mut max_an = vec![0.0; n];
            let mut responses: Vec<Vec<Complex<f64>>> = Vec::with_capacity(nscale);
            let mut tau = 0.0;

            for s in 0..nscale {
                let radial = &bank.radial[s];
                let mut eo: Vec<Complex<f64>> = (0..n)
                    .map(|i| image_fft[i] * (radial[i] * spread[i]))
                    .collect();
                fft::ifft2(&mut eo, w, h);

                let mut an = vec![0.0; n];
                for i in 0..n {
                    an[i] = eo[i].norm();
                    sum_an[i] += an[i];
                    sum_e[i] += eo[i].re;
                    sum_o[i] += eo[i].im;
                }
                if s == 0 {
                    // Rayleigh noise model: the median amplitude of the
                    // smallest-scale response estimates the noise mode.
                    tau = median(&mut an.clone()) / (4.0f64.ln()).sqrt();
                    max_an.copy_from_slice(&an);
                } else {
                    for i in 0..n {
                        max_an[i] = max_an[i].max(an[i]);
                    }
                }
                responses.push(eo);
            }

            // Mean phase vector per pixel.
            let mut mean_e = vec![0.0; n];
            let mut mean_o = vec![0.0; n];
            for i in 0..n {
                let x_energy = (sum_e[i] * sum_e[i] + sum_o[i] * sum_o[i]).sqrt() + EPSILON;
                mean_e[i] = sum_e[i] / x_energy;
                mean_o[i] = sum_o[i] / x_energy;
            }

            // Energy: amplitude times (cos deviation − |sin deviation|)
            // summed over scales.
            let mut energy = vec![0.0; n];
            for eo in &responses {
                for i in 0..n {
                    let e = eo[i].re;
                    let oo = eo[i].im;
                    energy[i] += e * mean_e[i] + oo * mean_o[i] - (e * mean_o[i] - oo * mean_e[i]).abs();
                }
            }

            // Total noise-energy threshold across scales: amplitudes fall
            // geometrically with scale (inverse of the wavelength ratio).
            let inv_mult = 1.0 / params.scale_multiplier;
            let geometric_total = if (params.scale_multiplier - 1.0).abs() < 1e-12 {
                nscale as f64
            } else {
                (1.0 - inv_mult.powi(nscale as i32)) / (1.0 - inv_mult)
            };
            let total_tau = tau * geometric_total;
            let noise_mean = total_tau * (PI / 2.0).sqrt();
            let noise_sigma = total_tau * ((4.0 - PI) / 2.0).sqrt();
            let threshold = noise_mean + params.noise_threshold_k * noise_sigma;

            let mut pc = vec![0.0; n];
            for i in 0..n {
                // Sigmoid weight of the fractional spread of responses
                // across scales.
                let spread_frac = if nscale > 1 {
                    (sum_an[i] / (max_an[i] + EPSILON) - 1.0) / (nscale as f64 - 1.0)
                } else {
                    1.0
                };
                let weight = 1.0 / (1.0 + (SPREAD_GAIN * (SPREAD_CUTOFF - spread_frac)).exp());
                let compensated = (energy[i] - threshold).max(0.0);
                pc[i] = weight * compensated / (sum_an[i] + EPSILON);
            }
            ImageBuffer::from_raw(w, h, pc)
        })
        .collect();

    Ok(maps)
}

/// Covariance moment fields over the discrete orientation set:
/// `a = Σ(PC(θ)cosθ)²`, `b = 2·Σ(PC(θ)cosθ·PC(θ)sinθ)`, `c = Σ(PC(θ)sinθ)²`.
pub fn moment_fields(
    pc_maps: &[ImageBuffer],
    orientations: &[f64],
) -> Result<(ImageBuffer, ImageBuffer, ImageBuffer)> {
    if pc_maps.is_empty() || pc_maps.len() != orientations.len() {
        return Err(Error::InvalidParameter {
            name: "pc_maps",
            reason: format!(
                "need one map per orientation, got {} maps for {} orientations",
                pc_maps.len(),
                orientations.len()
            ),
        });
    }
    let first = &pc_maps[0];
    for map in &pc_maps[1..] {
        first.same_dims(map)?;
    }

    let n = first.len();
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut c = vec![0.0; n];
    for (map, &angle) in pc_maps.iter().zip(orientations) {
        let (sin_t, cos_t) = angle.sin_cos();
        let pc = map.as_slice();
        for i in 0..n {
            let pc_cos = pc[i] * cos_t;
            let pc_sin = pc[i] * sin_t;
            a[i] += pc_cos * pc_cos;
            b[i] += 2.0 * (pc_cos * pc_sin);
            c[i] += pc_sin * pc_sin;
        }
    }
    let (w, h) = first.dims();
    Ok((
        ImageBuffer::from_raw(w, h, a),
        ImageBuffer::from_raw(w, h, b),
        ImageBuffer::from_raw(w, h, c),
    ))
}

/// Maximum moment of the orientation covariance:
/// `M = ½(c + a + √(b² + (a−c)²))`, pointwise, always ≥ 0 for a, c ≥ 0.
pub fn max_moment(a: &ImageBuffer, b: &ImageBuffer, c: &ImageBuffer) -> Result<ImageBuffer> {
    a.same_dims(b)?;
    a.same_dims(c)?;
    let (av, bv, cv) = (a.as_slice(), b.as_slice(), c.as_slice());
    let samples = (0..av.len())
        .map(|i| {
            let diff = av[i] - cv[i];
            0.5 * (cv[i] + av[i] + (bv[i] * bv[i] + diff * diff).sqrt())
        })
        .collect();
    let (w, h) = a.dims();
    Ok(ImageBuffer::from_raw(w, h, samples))
}

/// Global min-max normalization of M to [0, 1]. A constant field maps to
/// 0 everywhere: a featureless moment field carries no boundary evidence,
/// so the adjust factor degenerates to plain TV behavior (g = 1).
pub fn normalize_moment(m: &ImageBuffer) -> ImageBuffer {
    let min = m.min();
    let max = m.max();
    if max > min {
        let range = max - min;
        m.map(|v| (v - min) / range)
    } else {
        ImageBuffer::zeros(m.width(), m.height())
    }
}

/// Diffusion adjust factor `g = (1 − M_norm)^m`: 1 in featureless regions
/// (full diffusion), 0 on the strongest boundary (diffusion halted).
/// `m` must lie in 1..=5, matching the power study.
pub fn adjust_factor(m_norm: &ImageBuffer, m: u32) -> Result<ImageBuffer> {
    if !(1..=5).contains(&m) {
        return Err(Error::InvalidParameter {
            name: "power_m",
            reason: format!("must be an integer in 1..=5, got {m}"),
        });
    }
    if let Some(&bad) = m_norm
        .as_slice()
        .iter()
        .find(|v| !(0.0..=1.0).contains(*v))
    {
        return Err(Error::InvalidParameter {
            name: "m_norm",
            reason: format!("values must lie in [0, 1], got {bad}"),
        });
    }
    Ok(m_norm.map(|v| (1.0 - v).powi(m as i32)))
}

/// Full analysis: oriented PC maps, moment fields, maximum moment, and its
/// normalization, in one call.
pub fn analyze(u: &ImageBuffer, params: &PCParams) -> Result<PCResult> {
    let pc_maps = oriented_pc(u, params)?;
    let (a, b, c) = moment_fields(&pc_maps, &params.orientation_angles())?;
    let m = max_moment(&a, &b, &c)?;
    let m_norm = normalize_moment(&m);
    Ok(PCResult {
        pc_maps,
        a,
        b,
        c,
        m,
        m_norm,
    })
}
