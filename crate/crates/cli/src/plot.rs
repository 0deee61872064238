//! Minimal line-chart rendering for sweep curves. The CSV files are the
//! contract; these PNGs are a best-effort visual aid only.

use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, ImageFormat, Rgb, RgbImage};

use crate::error::{CliError, Result};
use crate::io::atomic_write;

const WIDTH: u32 = 720;
const HEIGHT: u32 = 480;
const MARGIN: u32 = 48;
const BG: Rgb<u8> = Rgb([255, 255, 255]);
const AXIS: Rgb<u8> = Rgb([40, 40, 40]);
const LINE: Rgb<u8> = Rgb([24, 90, 189]);

/// Renders `(x, y)` samples as a polyline with axes and writes a PNG.
/// Points with undefined y are skipped. Fails only on I/O problems; a
/// degenerate series (under two finite points) still produces the frame.
pub fn render_line(path: &Path, points: &[(f64, f64)]) -> Result<()> {
    let mut img = RgbImage::from_pixel(WIDTH, HEIGHT, BG);

    let x0 = MARGIN as i64;
    let x1 = (WIDTH - MARGIN) as i64;
    let y0 = (HEIGHT - MARGIN) as i64;
    let y1 = MARGIN as i64;
    draw_segment(&mut img, (x0, y0), (x1, y0), AXIS);
    draw_segment(&mut img, (x0, y0), (x0, y1), AXIS);

    let finite: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    if finite.len() >= 2 {
        let (xmin, xmax) = span(finite.iter().map(|p| p.0));
        let (ymin, ymax) = span(finite.iter().map(|p| p.1));
        let to_px = |(x, y): (f64, f64)| {
            let fx = (x - xmin) / (xmax - xmin).max(f64::MIN_POSITIVE);
            let fy = (y - ymin) / (ymax - ymin).max(f64::MIN_POSITIVE);
            (
                x0 + (fx * (x1 - x0) as f64).round() as i64,
                y0 - (fy * (y0 - y1) as f64).round() as i64,
            )
        };
        for pair in finite.windows(2) {
            draw_segment(&mut img, to_px(pair[0]), to_px(pair[1]), LINE);
        }
    }

    let mut bytes = Cursor::new(Vec::new());
    DynamicImage::ImageRgb8(img)
        .write_to(&mut bytes, ImageFormat::Png)
        .map_err(|e| CliError::Runtime(format!("plot encoding failed: {e}")))?;
    atomic_write(path, &bytes.into_inner())
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Bresenham segment, clipped to the canvas.
fn draw_segment(img: &mut RgbImage, from: (i64, i64), to: (i64, i64), color: Rgb<u8>) {
    let (mut x, mut y) = from;
    let dx = (to.0 - x).abs();
    let dy = -(to.1 - y).abs();
    let sx = if x < to.0 { 1 } else { -1 };
    let sy = if y < to.1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        if (0..WIDTH as i64).contains(&x) && (0..HEIGHT as i64).contains(&y) {
            img.put_pixel(x as u32, y as u32, color);
        }
        if x == to.0 && y == to.1 {
            break;
        }
        let twice = 2 * err;
        if twice >= dy {
            err += dy;
            x += sx;
        }
        if twice <= dx {
            err += dx;
            y += sy;
        }
    }
}
