//! PNG and PGM loading and saving.
//!
//! Only single-channel images are accepted: 8- or 16-bit grayscale PNG,
//! and binary PGM (`P5`) with a maxval of 255 or 65535. PGM stores
//! 16-bit samples big-endian, matching the Netpbm convention.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use image::{DynamicImage, ImageBuffer, Luma};

use super::{BitDepth, Image};
use crate::error::DenoiseError;

/// Loads a grayscale image, picking the decoder from the file extension.
pub fn load_image(path: &Path) -> Result<Image, DenoiseError> {
    match extension_of(path)?.as_str() {
        "png" => load_png(path),
        "pgm" => load_pgm(path),
        other => Err(DenoiseError::Format(format!(
            "unsupported image extension: .{other}"
        ))),
    }
}

/// Saves an image, picking the encoder from the file extension.
///
/// Samples are quantized to the image's original bit depth by rounding.
pub fn save_image(image: &Image, path: &Path) -> Result<(), DenoiseError> {
    match extension_of(path)?.as_str() {
        "png" => save_png(image, path),
        "pgm" => save_pgm(image, path),
        other => Err(DenoiseError::Format(format!(
            "unsupported image extension: .{other}"
        ))),
    }
}

fn extension_of(path: &Path) -> Result<String, DenoiseError> {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .ok_or_else(|| {
            DenoiseError::Format(format!("missing image extension: {}", path.display()))
        })
}

fn load_png(path: &Path) -> Result<Image, DenoiseError> {
    let decoded = image::open(path).map_err(|e| match e {
        image::ImageError::IoError(source) => DenoiseError::io(path, source),
        other => DenoiseError::Format(format!("{}: {other}", path.display())),
    })?;
    match decoded {
        DynamicImage::ImageLuma8(buffer) => {
            let (width, height) = buffer.dimensions();
            let data = buffer.pixels().map(|p| f64::from(p.0[0]) / 255.0).collect();
            Image::from_data(height as usize, width as usize, data, BitDepth::Eight)
        }
        DynamicImage::ImageLuma16(buffer) => {
            let (width, height) = buffer.dimensions();
            let data = buffer
                .pixels()
                .map(|p| f64::from(p.0[0]) / 65535.0)
                .collect();
            Image::from_data(height as usize, width as usize, data, BitDepth::Sixteen)
        }
        _ => Err(DenoiseError::Format(format!(
            "{}: only single-channel grayscale images are supported",
            path.display()
        ))),
    }
}

fn save_png(image: &Image, path: &Path) -> Result<(), DenoiseError> {
    let width = image.width() as u32;
    let height = image.height() as u32;
    let result = match image.bit_depth() {
        BitDepth::Eight => {
            let samples: Vec<u8> = image.data().iter().map(|&v| quantize(v, 255.0) as u8).collect();
            let buffer: ImageBuffer<Luma<u8>, _> =
                ImageBuffer::from_raw(width, height, samples).expect("sample count matches shape");
            buffer.save(path)
        }
        BitDepth::Sixteen => {
            let samples: Vec<u16> = image
                .data()
                .iter()
                .map(|&v| quantize(v, 65535.0) as u16)
                .collect();
            let buffer: ImageBuffer<Luma<u16>, _> =
                ImageBuffer::from_raw(width, height, samples).expect("sample count matches shape");
            buffer.save(path)
        }
    };
    result.map_err(|e| match e {
        image::ImageError::IoError(source) => DenoiseError::io(path, source),
        other => DenoiseError::Format(format!("{}: {other}", path.display())),
    })
}

fn quantize(value: f64, max: f64) -> u32 {
    (value * max).round().clamp(0.0, max) as u32
}

fn load_pgm(path: &Path) -> Result<Image, DenoiseError> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| DenoiseError::io(path, e))?;
    let bad = |msg: &str| DenoiseError::Format(format!("{}: {msg}", path.display()));

    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(bad("not a binary PGM (missing P5 magic)"));
    }
    let mut cursor = 2;
    let width = read_pgm_number(&bytes, &mut cursor).ok_or_else(|| bad("missing width"))?;
    let height = read_pgm_number(&bytes, &mut cursor).ok_or_else(|| bad("missing height"))?;
    let maxval = read_pgm_number(&bytes, &mut cursor).ok_or_else(|| bad("missing maxval"))?;
    // The header ends with exactly one whitespace byte before the raster.
    cursor += 1;

    let (bit_depth, bytes_per_sample) = match maxval {
        255 => (BitDepth::Eight, 1),
        65535 => (BitDepth::Sixteen, 2),
        other => return Err(bad(&format!("unsupported maxval {other}"))),
    };
    let expected = width * height * bytes_per_sample;
    let raster = bytes
        .get(cursor..cursor + expected)
        .ok_or_else(|| bad("truncated raster"))?;

    let scale = maxval as f64;
    let data: Vec<f64> = match bit_depth {
        BitDepth::Eight => raster.iter().map(|&b| f64::from(b) / scale).collect(),
        BitDepth::Sixteen => raster
            .chunks_exact(2)
            .map(|pair| f64::from(u16::from_be_bytes([pair[0], pair[1]])) / scale)
            .collect(),
    };
    Image::from_data(height, width, data, bit_depth)
}

/// Reads the next decimal token, skipping whitespace and `#` comments.
fn read_pgm_number(bytes: &[u8], cursor: &mut usize) -> Option<usize> {
    loop {
        while *cursor < bytes.len() && bytes[*cursor].is_ascii_whitespace() {
            *cursor += 1;
        }
        if *cursor < bytes.len() && bytes[*cursor] == b'#' {
            while *cursor < bytes.len() && bytes[*cursor] != b'\n' {
                *cursor += 1;
            }
            continue;
        }
        break;
    }
    let start = *cursor;
    while *cursor < bytes.len() && bytes[*cursor].is_ascii_digit() {
        *cursor += 1;
    }
    if *cursor == start {
        return None;
    }
    std::str::from_utf8(&bytes[start..*cursor]).ok()?.parse().ok()
}

fn save_pgm(image: &Image, path: &Path) -> Result<(), DenoiseError> {
    let file = File::create(path).map_err(|e| DenoiseError::io(path, e))?;
    let mut writer = BufWriter::new(file);
    let max = image.bit_depth().max_value();
    let header = format!("P5\n{} {}\n{}\n", image.width(), image.height(), max as u32);
    let io_err = |e| DenoiseError::io(path, e);
    writer.write_all(header.as_bytes()).map_err(io_err)?;
    match image.bit_depth() {
        BitDepth::Eight => {
            let raster: Vec<u8> = image.data().iter().map(|&v| quantize(v, max) as u8).collect();
            writer.write_all(&raster).map_err(io_err)?;
        }
        BitDepth::Sixteen => {
            let mut raster = Vec::with_capacity(image.data().len() * 2);
            for &v in image.data() {
                raster.extend_from_slice(&(quantize(v, max) as u16).to_be_bytes());
            }
            writer.write_all(&raster).map_err(io_err)?;
        }
    }
    writer.flush().map_err(io_err)
}
