//! Grayscale image file I/O. Binary PGM (P5) is the canonical format;
//! 8-bit grayscale PNG is accepted and written as well. The pipeline is
//! real-valued throughout: clamping to [0, 255] and rounding happen only
//! here, at export. All writes are atomic (temp file + rename) so a
//! crashed run never leaves a truncated image behind.

use std::fs;
use std::io::{Cursor, Write};
use std::path::Path;

use image::{DynamicImage, ImageFormat};
use mpctv_core::image::ImageBuffer;

use crate::error::{CliError, Result};

/// Reads a grayscale image, dispatching on the file extension
/// (`.pgm`/`.pnm` or `.png`). Color PNG input is converted to luma.
pub fn read_gray(path: &Path) -> Result<ImageBuffer> {
    match extension_of(path)?.as_str() {
        "pgm" | "pnm" => read_pgm(path),
        "png" => read_png(path),
        other => Err(CliError::Runtime(format!(
            "unsupported image format '.{other}' for {} (expected .pgm or .png)",
            path.display()
        ))),
    }
}

/// Writes an image as 8-bit grayscale, clamping to [0, 255] and rounding
/// each sample. Format follows the file extension.
pub fn write_gray(path: &Path, img: &ImageBuffer) -> Result<()> {
    let bytes = match extension_of(path)?.as_str() {
        "pgm" | "pnm" => encode_pgm(img),
        "png" => encode_png(img)?,
        other => {
            return Err(CliError::Runtime(format!(
                "unsupported image format '.{other}' for {} (expected .pgm or .png)",
                path.display()
            )))
        }
    };
    atomic_write(path, &bytes)
}

/// Clamps to [0, 255] and rounds to the nearest 8-bit level.
pub fn quantize(img: &ImageBuffer) -> Vec<u8> {
    img.as_slice()
        .iter()
        .map(|&v| v.clamp(0.0, 255.0).round() as u8)
        .collect()
}

/// Writes `bytes` to `path` atomically: the data lands in a temp file in
/// the destination directory and is renamed into place.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| {
        CliError::Runtime(format!("cannot create temp file in {}: {e}", dir.display()))
    })?;
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn extension_of(path: &Path) -> Result<String> {
    path.extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
        .ok_or_else(|| {
            CliError::Runtime(format!(
                "{} has no file extension; cannot determine image format",
                path.display()
            ))
        })
}

fn read_png(path: &Path) -> Result<ImageBuffer> {
    let dynamic = image::open(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let luma = dynamic.to_luma8();
    let (w, h) = (luma.width() as usize, luma.height() as usize);
    let samples = luma.into_raw().iter().map(|&b| f64::from(b)).collect();
    ImageBuffer::from_samples(w, h, samples).map_err(Into::into)
}

fn encode_png(img: &ImageBuffer) -> Result<Vec<u8>> {
    let gray = image::GrayImage::from_raw(
        img.width() as u32,
        img.height() as u32,
        quantize(img),
    )
    .expect("quantized buffer length matches dimensions");
    let mut bytes = Cursor::new(Vec::new());
    DynamicImage::ImageLuma8(gray)
        .write_to(&mut bytes, ImageFormat::Png)
        .map_err(|e| CliError::Runtime(format!("png encoding failed: {e}")))?;
    Ok(bytes.into_inner())
}

fn read_pgm(path: &Path) -> Result<ImageBuffer> {
    let data = fs::read(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let err = |msg: &str| CliError::Runtime(format!("{}: {msg}", path.display()));

    if data.len() < 2 || &data[0..2] != b"P5" {
        return Err(err("not a binary PGM (P5) file"));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        *field = parse_header_int(&data, &mut pos)
            .ok_or_else(|| err("malformed PGM header"))?;
    }
    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 255 {
        return Err(err("only 8-bit PGM (maxval <= 255) is supported"));
    }
    // Exactly one whitespace byte separates the header from the raster.
    pos += 1;
    let expected = width
        .checked_mul(height)
        .filter(|n| *n > 0)
        .ok_or_else(|| err("invalid PGM dimensions"))?;
    let raster = data
        .get(pos..pos + expected)
        .ok_or_else(|| err("PGM raster shorter than header promises"))?;
    let samples = raster.iter().map(|&b| f64::from(b)).collect();
    ImageBuffer::from_samples(width, height, samples).map_err(Into::into)
}

fn encode_pgm(img: &ImageBuffer) -> Vec<u8> {
    let mut bytes = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    bytes.extend(quantize(img));
    bytes
}

/// Reads the next decimal integer in a PGM header, skipping whitespace
/// and `#` comment lines, leaving `pos` on the terminating byte.
fn parse_header_int(data: &[u8], pos: &mut usize) -> Option<usize> {
    loop {
        match data.get(*pos)? {
            b' ' | b'\t' | b'\r' | b'\n' => *pos += 1,
            b'#' => {
                while *data.get(*pos)? != b'\n' {
                    *pos += 1;
                }
            }
            b'0'..=b'9' => break,
            _ => return None,
        }
    }
    let mut value: usize = 0;
    while let Some(d @ b'0'..=b'9') = data.get(*pos) {
        value = value.checked_mul(10)?.checked_add(usize::from(d - b'0'))?;
        *pos += 1;
    }
    Some(value)
}
