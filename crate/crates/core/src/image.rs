//! Real-valued image buffers and the finite-difference kernels used by the
//! diffusion solvers.
//!
//! Conventions shared by every operation in the crate:
//!
//! - Samples are stored row-major; `x` indexes columns, `y` indexes rows.
//! - `u_x` is the derivative along x (columns), `u_y` along y (rows).
//! - First derivatives are central differences, second derivatives the
//!   3-point stencil, and the mixed derivative is the central difference
//!   of `u_x` along y.
//! - Boundaries use replicate (Neumann) extension: the sample grid is
//!   conceptually extended by copying edge pixels outward, which makes the
//!   diffusion flux across image borders zero.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// A 2-D grid of real-valued intensity samples.
///
/// The nominal range for loaded 8-bit images is [0, 255] but values are
/// unbounded during iteration; clamping happens only at export time.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

impl ImageBuffer {
    /// Zero-filled buffer. `width` and `height` must be ≥ 1.
    pub fn zeros(width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "empty image dimensions");
        Self {
            width,
            height,
            samples: vec![0.0; width * height],
        }
    }

    /// Constant-valued buffer.
    pub fn constant(width: usize, height: usize, value: f64) -> Self {
        assert!(width >= 1 && height >= 1, "empty image dimensions");
        Self {
            width,
            height,
            samples: vec![value; width * height],
        }
    }

    /// Buffer from row-major samples. Rejects empty dimensions, length
    /// mismatches, and non-finite samples.
    pub fn from_samples(width: usize, height: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || samples.len() != width * height {
            return Err(Error::BadGeometry {
                width,
                height,
                samples: samples.len(),
            });
        }
        for (index, &value) in samples.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteSample { index, value });
            }
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// Internal constructor for freshly computed sample vectors; callers
    /// guarantee the geometry.
    pub(crate) fn from_raw(width: usize, height: usize, samples: Vec<f64>) -> Self {
        debug_assert!(width >= 1 && height >= 1 && samples.len() == width * height);
        Self {
            width,
            height,
            samples,
        }
    }

    /// Buffer filled by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(width >= 1 && height >= 1, "empty image dimensions");
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            samples,
        }
    }

    /// Buffer from nested rows (test convenience).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if height == 0 || width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::BadGeometry {
                width,
                height,
                samples: rows.iter().map(Vec::len).sum(),
            });
        }
        Self::from_samples(width, height, rows.concat())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// (width, height).
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Total pixel count.
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Never true for a constructed buffer; kept for API completeness.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        debug_assert!(x < self.width && y < self.height);
        self.samples[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        debug_assert!(x < self.width && y < self.height);
        self.samples[y * self.width + x] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.samples
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Pointwise map into a new buffer of the same dimensions.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let samples = self.samples.iter().map(|&v| f(v)).collect();
        Self {
            width: self.width,
            height: self.height,
            samples,
        }
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Mean of squared samples.
    pub fn mean_sq(&self) -> f64 {
        self.samples.iter().map(|&v| v * v).sum::<f64>() / self.samples.len() as f64
    }

    /// True when every sample is finite.
    pub fn all_finite(&self) -> bool {
        self.samples.iter().all(|v| v.is_finite())
    }

    pub(crate) fn same_dims(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }

    /// Row index clamped to the valid range (replicate extension).
    #[inline]
    fn clamp_y(&self, y: isize) -> usize {
        y.clamp(0, self.height as isize - 1) as usize
    }

    /// Column index clamped to the valid range (replicate extension).
    #[inline]
    fn clamp_x(&self, x: isize) -> usize {
        x.clamp(0, self.width as isize - 1) as usize
    }

    /// Sample under replicate extension; accepts out-of-range coordinates.
    #[inline]
    pub fn get_replicate(&self, x: isize, y: isize) -> f64 {
        self.samples[self.clamp_y(y) * self.width + self.clamp_x(x)]
    }
}

/// First- and second-order spatial derivatives of one image.
///
/// All five fields share the source dimensions; on a constant image every
/// field is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeSet {
    pub u_x: ImageBuffer,
    pub u_y: ImageBuffer,
    pub u_xx: ImageBuffer,
    pub u_yy: ImageBuffer,
    pub u_xy: ImageBuffer,
}

/// Gradient regularizer: a single scalar or a per-pixel field (the
/// MPC-TV solver uses ε_i = ε₀ · g_i, which varies per pixel).
#[derive(Debug, Clone, Copy)]
pub enum Eps<'a> {
    Scalar(f64),
    Field(&'a ImageBuffer),
}

impl From<f64> for Eps<'static> {
    fn from(value: f64) -> Self {
        Eps::Scalar(value)
    }
}

impl<'a> From<&'a ImageBuffer> for Eps<'a> {
    fn from(field: &'a ImageBuffer) -> Self {
        Eps::Field(field)
    }
}

impl<'a> Eps<'a> {
    #[inline]
    fn at(&self, index: usize) -> f64 {
        match self {
            Eps::Scalar(v) => *v,
            Eps::Field(f) => f.as_slice()[index],
        }
    }

    /// Validates non-negativity (and dimensions for the field form).
    fn validate(&self, dims_like: &ImageBuffer) -> Result<()> {
        match self {
            Eps::Scalar(v) => {
                if !v.is_finite() || *v < 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "eps",
                        reason: format!("must be finite and >= 0, got {v}"),
                    });
                }
            }
            Eps::Field(f) => {
                dims_like.same_dims(f)?;
                if let Some(&bad) = f.as_slice().iter().find(|v| !v.is_finite() || **v < 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "eps",
                        reason: format!("field must be finite and >= 0, got {bad}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Central-difference first and second derivatives with replicate
/// (Neumann) boundary extension:
///
/// - `u_x(x, y) = (u(x+1, y) − u(x−1, y)) / 2`, analogously `u_y`
/// - `u_xx(x, y) = u(x+1, y) − 2·u(x, y) + u(x−1, y)`, analogously `u_yy`
/// - `u_xy` = central difference of `u_x` along y
pub fn derivatives(u: &ImageBuffer) -> DerivativeSet {
    let (w, h) = u.dims();
    let src = u.as_slice();

    let mut u_x = vec![0.0; w * h];
    let mut u_y = vec![0.0; w * h];
    let mut u_xx = vec![0.0; w * h];
    let mut u_yy = vec![0.0; w * h];

    // Row-parallel; each output pixel depends only on the source, so the
    // result is bit-identical for any worker count.
    u_x.par_chunks_mut(w)
        .zip(u_y.par_chunks_mut(w))
        .zip(u_xx.par_chunks_mut(w))
        .zip(u_yy.par_chunks_mut(w))
        .enumerate()
        .for_each(|(y, (((row_x, row_y), row_xx), row_yy))| {
            let ym = y.saturating_sub(1);
            let yp = (y + 1).min(h - 1);
            let row = &src[y * w..(y + 1) * w];
            let row_above = &src[ym * w..ym * w + w];
            let row_below = &src[yp * w..yp * w + w];
            for x in 0..w {
                let xm = x.saturating_sub(1);
                let xp = (x + 1).min(w - 1);
                let c = row[x];
                let l = row[xm];
                let r = row[xp];
                let t = row_above[x];
                let b = row_below[x];
                row_x[x] = 0.5 * (r - l);
                row_y[x] = 0.5 * (b - t);
                row_xx[x] = r - 2.0 * c + l;
                row_yy[x] = b - 2.0 * c + t;
            }
        });

    // Mixed derivative from the already-computed u_x field.
    let mut u_xy = vec![0.0; w * h];
    u_xy.par_chunks_mut(w).enumerate().for_each(|(y, row_xy)| {
        let ym = y.saturating_sub(1);
        let yp = (y + 1).min(h - 1);
        for x in 0..w {
            row_xy[x] = 0.5 * (u_x[yp * w + x] - u_x[ym * w + x]);
        }
    });

    let wrap = |samples: Vec<f64>| ImageBuffer {
        width: w,
        height: h,
        samples,
    };
    DerivativeSet {
        u_x: wrap(u_x),
        u_y: wrap(u_y),
        u_xx: wrap(u_xx),
        u_yy: wrap(u_yy),
        u_xy: wrap(u_xy),
    }
}

/// Regularized gradient magnitude `sqrt(u_x² + u_y² + ε²)` per pixel.
///
/// Strictly positive wherever ε > 0; equals ε exactly where the gradient
/// vanishes.
pub fn gradient_magnitude<'a>(
    u_x: &ImageBuffer,
    u_y: &ImageBuffer,
    eps: impl Into<Eps<'a>>,
) -> Result<ImageBuffer> {
    let eps = eps.into();
    u_x.same_dims(u_y)?;
    eps.validate(u_x)?;

    let gx = u_x.as_slice();
    let gy = u_y.as_slice();
    let samples = (0..gx.len())
        .map(|i| {
            let e = eps.at(i);
            (gx[i] * gx[i] + gy[i] * gy[i] + e * e).sqrt()
        })
        .collect();
    Ok(ImageBuffer {
        width: u_x.width,
        height: u_x.height,
        samples,
    })
}

/// Second derivative along the level-line direction (perpendicular to the
/// gradient), regularized:
///
/// `((u_y² + ε²)·u_xx − 2·u_x·u_y·u_xy + (u_x² + ε²)·u_yy) / (u_x² + u_y² + ε²)`
///
/// Errors with [`Error::SingularGradient`] if the denominator vanishes at
/// any pixel (zero gradient with zero ε).
pub fn edge_second_derivative<'a>(
    d: &DerivativeSet,
    eps: impl Into<Eps<'a>>,
) -> Result<ImageBuffer> {
    let eps = eps.into();
    eps.validate(&d.u_x)?;

    let ux = d.u_x.as_slice();
    let uy = d.u_y.as_slice();
    let uxx = d.u_xx.as_slice();
    let uyy = d.u_yy.as_slice();
    let uxy = d.u_xy.as_slice();

    let mut samples = vec![0.0; ux.len()];
    for (i, out) in samples.iter_mut().enumerate() {
        let e = eps.at(i);
        let e2 = e * e;
        let ux2 = ux[i] * ux[i];
        let uy2 = uy[i] * uy[i];
        let denom = ux2 + uy2 + e2;
        if denom == 0.0 {
            return Err(Error::SingularGradient(i));
        }
        let num = (uy2 + e2) * uxx[i] - 2.0 * ux[i] * uy[i] * uxy[i] + (ux2 + e2) * uyy[i];
        *out = num / denom;
    }
    Ok(ImageBuffer {
        width: d.u_x.width,
        height: d.u_x.height,
        samples,
    })
}

/// 3×3 median filter with replicate boundary extension: each output pixel
/// is the exact median (5th order statistic) of its 9-sample neighborhood.
pub fn median3x3(u: &ImageBuffer) -> ImageBuffer {
    let (w, h) = u.dims();
    let src = u.as_slice();
    let mut out = vec![0.0; w * h];

    out.par_chunks_mut(w).enumerate().for_each(|(y, row_out)| {
        let ym = y.saturating_sub(1);
        let yp = (y + 1).min(h - 1);
        let rows = [&src[ym * w..ym * w + w], &src[y * w..y * w + w], &src[yp * w..yp * w + w]];
        for (x, out_px) in row_out.iter_mut().enumerate() {
            let xm = x.saturating_sub(1);
            let xp = (x + 1).min(w - 1);
            let mut window = [
                rows[0][xm], rows[0][x], rows[0][xp],
                rows[1][xm], rows[1][x], rows[1][xp],
                rows[2][xm], rows[2][x], rows[2][xp],
            ];
            // Samples are finite by construction, so total order is safe.
            window.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            *out_px = window[4];
        }
    });

    ImageBuffer {
        width: w,
        height: h,
        samples: out,
    }
}
