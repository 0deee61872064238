//! Plan-cached 2-D FFT support for the frequency-domain filter bank.
//!
//! Thin wrapper over rustfft: rows are transformed in place, then columns
//! via transpose / transform / transpose. The inverse transform applies the
//! conventional 1/(width·height) normalization so `ifft2(fft2(x)) == x` up
//! to rounding.

use std::sync::Mutex;

use once_cell::sync::Lazy;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::image::ImageBuffer;

/// Planner shared across calls; rustfft caches plans per length internally.
static PLANNER: Lazy<Mutex<FftPlanner<f64>>> = Lazy::new(|| Mutex::new(FftPlanner::new()));

fn plan(len: usize, direction: FftDirection) -> std::sync::Arc<dyn Fft<f64>> {
    let mut planner = PLANNER.lock().expect("FFT planner lock poisoned");
    match direction {
        FftDirection::Forward => planner.plan_fft_forward(len),
        FftDirection::Inverse => planner.plan_fft_inverse(len),
    }
}

fn transpose(src: &[Complex<f64>], dst: &mut [Complex<f64>], width: usize, height: usize) {
    for y in 0..height {
        for x in 0..width {
            dst[x * height + y] = src[y * width + x];
        }
    }
}

fn transform_2d(data: &mut [Complex<f64>], width: usize, height: usize, dir: FftDirection) {
    assert_eq!(data.len(), width * height, "buffer/dimension mismatch");

    let row_fft = plan(width, dir);
    let mut scratch = vec![Complex::default(); row_fft.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(width) {
        row_fft.process_with_scratch(row, &mut scratch);
    }

    let mut transposed = vec![Complex::default(); data.len()];
    transpose(data, &mut transposed, width, height);

    let col_fft = plan(height, dir);
    let mut scratch = vec![Complex::default(); col_fft.get_inplace_scratch_len()];
    for col in transposed.chunks_exact_mut(height) {
        col_fft.process_with_scratch(col, &mut scratch);
    }

    transpose(&transposed, data, height, width);
}

/// In-place forward 2-D FFT of a row-major buffer.
pub fn fft2(data: &mut [Complex<f64>], width: usize, height: usize) {
    transform_2d(data, width, height, FftDirection::Forward);
}

/// In-place inverse 2-D FFT with 1/(width·height) normalization.
pub fn ifft2(data: &mut [Complex<f64>], width: usize, height: usize) {
    transform_2d(data, width, height, FftDirection::Inverse);
    let scale = 1.0 / (width * height) as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Image samples as a complex buffer (zero imaginary parts).
pub fn to_complex(u: &ImageBuffer) -> Vec<Complex<f64>> {
    u.as_slice().iter().map(|&v| Complex::new(v, 0.0)).collect()
}
