//! Deterministic synthetic grayscale test scene.
//!
//! The standard photographic test images cannot be redistributed here, so
//! the toolkit ships a procedural substitute: a 512x512 scene mixing flat
//! regions, smooth illumination gradients, hard-edged shapes, and several
//! texture families. The feature amplitudes below were calibrated so the
//! scene's global statistics (mean level, signal energy, and the local
//! variance mix that drives windowed similarity scores under noise) fall
//! in the range typical of natural 8-bit photographs. The generator is
//! pure arithmetic on pixel coordinates: the same dimensions always
//! produce byte-identical output.

use mpctv_core::image::ImageBuffer;

/// Mean level of the illumination base field.
const BASE_LEVEL: f64 = 130.0;
/// Amplitude of the slow illumination modulation.
const BASE_SWING: f64 = 24.0;
/// Brightness lift inside the large ellipse.
const ELLIPSE_LIFT: f64 = 30.0;
/// Quadratic interior shading of the ellipse.
const ELLIPSE_SHADE: f64 = 8.0;
/// Gray level of the bright rectangle.
const RECT_LEVEL: f64 = 168.0;
/// Gray level of the dark disc.
const DISC_LEVEL: f64 = 28.0;
/// Gray level of the diagonal bar.
const BAR_LEVEL: f64 = 215.0;
/// Ground level and texture amplitude of the left band.
const BAND_LEVEL: f64 = 64.0;
const BAND_TEXTURE: f64 = 72.0;
/// Amplitude of the stochastic value-noise texture (annulus).
const VALUE_NOISE_AMP: f64 = 0.0;
/// Lattice cell size of the value-noise texture, in pixels.
const VALUE_NOISE_CELL: f64 = 5.5;
/// Level spread of the scattered-disc field and its grid pitch.
const DISC_FIELD_SPREAD: f64 = 36.0;
const DISC_FIELD_PITCH: f64 = 52.0;
/// Output clamp range keeping noise additions mostly inside [0, 255].
const LEVEL_MIN: f64 = 8.0;
const LEVEL_MAX: f64 = 247.0;

/// Generates the square test scene at the given side length (512 is the
/// reference size; geometry scales with the side, texture wavelengths
/// stay in pixels).
pub fn phantom(side: usize) -> ImageBuffer {
    let s = side as f64;
    ImageBuffer::from_fn(side, side, |xi, yi| {
        let px = xi as f64;
        let py = yi as f64;
        // Normalized coordinates for geometry, pixels for texture.
        let u = px / s;
        let v = py / s;

        let mut val = BASE_LEVEL
            + BASE_SWING
                * (std::f64::consts::TAU * (0.9 * u + 0.13)).sin()
                * (std::f64::consts::TAU * (0.6 * v + 0.31)).cos();

        // Large rotated ellipse with interior shading.
        let (eu, ev) = rotate(u - 0.42, v - 0.40, 0.35);
        let er = (eu / 0.26).powi(2) + (ev / 0.33).powi(2);
        if er < 1.0 {
            val += ELLIPSE_LIFT - ELLIPSE_SHADE * er;
        }

        // Bright rectangle, upper right.
        if (0.66..0.94).contains(&u) && (0.08..0.40).contains(&v) {
            val = RECT_LEVEL + 14.0 * ((v - 0.08) / 0.32 - 0.5);
        }

        // Dark disc, lower right, with a bright interior dot.
        if (u - 0.76).powi(2) + (v - 0.74).powi(2) < 0.13f64.powi(2) {
            val = DISC_LEVEL + 30.0 * (u - 0.76);
            if (u - 0.72).powi(2) + (v - 0.71).powi(2) < 0.035f64.powi(2) {
                val = 200.0;
            }
        }

        // Diagonal bar across the lower left.
        if (u - 0.5 * v - 0.12).abs() < 0.022 && v > 0.52 {
            val = BAR_LEVEL;
        }

        // Dark diagonal bar crossing the left band.
        if (v - 1.55 * u - 0.25).abs() < 0.018 && (0.02..0.40).contains(&u) {
            val = 30.0;
        }

        // Wavy dark line across the upper base.
        let wave = 0.16 + 0.07 * (std::f64::consts::TAU * 0.8 * u).sin();
        if (v - wave).abs() < 0.015 && (0.04..0.62).contains(&u) {
            val = 32.0;
        }

        // Dark line through the lower-middle base wedge.
        if (v - 0.9 * u).abs() < 0.014 && (0.52..0.68).contains(&u) {
            val = 34.0;
        }
        // Dark line across the right base between the panel and the disc.
        if (v - 0.50 - 0.10 * (u - 0.78)).abs() < 0.014 && (0.64..0.93).contains(&u) {
            val = 36.0;
        }

        // Scattered discs on a jittered grid: small hard-edged features
        // layered over whatever lies beneath them.
        {
            let gx = (px / DISC_FIELD_PITCH).floor() as i64;
            let gy = (py / DISC_FIELD_PITCH).floor() as i64;
            let cx = (gx as f64 + 0.5 + 0.3 * lattice(gx, gy, 21)) * DISC_FIELD_PITCH;
            let cy = (gy as f64 + 0.5 + 0.3 * lattice(gx, gy, 22)) * DISC_FIELD_PITCH;
            let radius = 9.0 + 3.0 * lattice(gx, gy, 23);
            if (px - cx).powi(2) + (py - cy).powi(2) < radius * radius {
                val += DISC_FIELD_SPREAD * lattice(gx, gy, 24);
            }
        }

        // Left band: dark ground under dense fine-grain texture.
        if u < 0.14 {
            let n = value_noise(2.2 * px, 0.8 * py, VALUE_NOISE_CELL, 11)
                + 0.5 * value_noise(2.2 * px, 0.8 * py, 2.0 * VALUE_NOISE_CELL, 12);
            val = BAND_LEVEL + BAND_TEXTURE * n;
        }

        // Annulus around the ellipse: stochastic fine texture.
        if (1.0..1.45).contains(&er) && u >= 0.14 {
            let n = value_noise(px, py, VALUE_NOISE_CELL, 11)
                + 0.5 * value_noise(px, py, 2.0 * VALUE_NOISE_CELL, 12);
            val += VALUE_NOISE_AMP * n;
        }

        // Speck field: small dark dots over the mid and dark zones.
        {
            let gx = (px / 16.0).floor() as i64;
            let gy = (py / 16.0).floor() as i64;
            if lattice(gx, gy, 31) > 0.5 && val < 165.0 {
                let cx = (gx as f64 + 0.5 + 0.3 * lattice(gx, gy, 34)) * 16.0;
                let cy = (gy as f64 + 0.5 + 0.3 * lattice(gx, gy, 35)) * 16.0;
                let radius = 1.7 + 0.9 * lattice(gx, gy, 32).abs();
                if (px - cx).powi(2) + (py - cy).powi(2) < radius * radius {
                    val -= 68.0 + 42.0 * lattice(gx, gy, 33).abs();
                }
            }
        }

        // Frequency-swept strip along the bottom edge.
        if v > 0.86 && (0.04..0.96).contains(&u) {
            let freq = 0.04 + 0.22 * u;
            val += 6.0 * (std::f64::consts::TAU * freq * px).sin();
        }

        // Sector star: alternating wedges put edges at every orientation.
        {
            let dx = u - 0.87;
            let dy = v - 0.57;
            if dx * dx + dy * dy < 0.045f64.powi(2) {
                let sector = ((dy.atan2(dx) + std::f64::consts::PI)
                    / (std::f64::consts::PI / 6.0)) as i64;
                val = if sector % 2 == 0 { 233.0 } else { 23.0 };
            }
        }

        val.clamp(LEVEL_MIN, LEVEL_MAX)
    })
}

fn rotate(x: f64, y: f64, angle: f64) -> (f64, f64) {
    let (sin, cos) = angle.sin_cos();
    (x * cos + y * sin, -x * sin + y * cos)
}

/// Deterministic lattice hash in [-1, 1).
fn lattice(ix: i64, iy: i64, salt: u64) -> f64 {
    let mut z = (ix as u64)
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((iy as u64).wrapping_mul(0xD1B5_4A32_D192_ED03))
        ^ salt.wrapping_mul(0x94D0_49BB_1331_11EB);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

/// Smoothly interpolated lattice noise with the given cell size.
fn value_noise(x: f64, y: f64, cell: f64, salt: u64) -> f64 {
    let gx = x / cell;
    let gy = y / cell;
    let fx = gx - gx.floor();
    let fy = gy - gy.floor();
    let sx = fx * fx * (3.0 - 2.0 * fx);
    let sy = fy * fy * (3.0 - 2.0 * fy);
    let x0 = gx.floor() as i64;
    let y0 = gy.floor() as i64;
    let v00 = lattice(x0, y0, salt);
    let v10 = lattice(x0 + 1, y0, salt);
    let v01 = lattice(x0, y0 + 1, salt);
    let v11 = lattice(x0 + 1, y0 + 1, salt);
    let a = v00 + (v10 - v00) * sx;
    let b = v01 + (v11 - v01) * sx;
    a + (b - a) * sy
}
