//! In-memory raster types.
//!
//! [`GrayImage`] holds 8-bit intensities in row-major order. [`BinaryImage`]
//! holds the result of a threshold split and only ever contains `0`
//! (background) or `255` (foreground).

use thiserror::Error;

/// Background level of a binarized pixel.
pub const BACKGROUND: u8 = 0;
/// Foreground level of a binarized pixel.
pub const FOREGROUND: u8 = 255;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImageError {
    #[error("image dimensions must be non-zero (got {width}x{height})")]
    ZeroDimension { width: usize, height: usize },
    #[error("image dimensions {width}x{height} overflow the addressable pixel count")]
    TooLarge { width: usize, height: usize },
    #[error("pixel buffer holds {found} samples, {width}x{height} requires {expected}")]
    LengthMismatch {
        width: usize,
        height: usize,
        expected: usize,
        found: usize,
    },
    #[error("binary image sample {value} at index {index} is neither 0 nor 255")]
    NotBinary { index: usize, value: u8 },
}

/// Checks dimensions and returns the pixel count they imply.
pub(crate) fn pixel_count(width: usize, height: usize) -> Result<usize, ImageError> {
    if width == 0 || height == 0 {
        return Err(ImageError::ZeroDimension { width, height });
    }
    width
        .checked_mul(height)
        .ok_or(ImageError::TooLarge { width, height })
}

fn check_len(width: usize, height: usize, found: usize) -> Result<(), ImageError> {
    let expected = pixel_count(width, height)?;
    if expected != found {
        return Err(ImageError::LengthMismatch {
            width,
            height,
            expected,
            found,
        });
    }
    Ok(())
}

/// An 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        check_len(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image of the given size with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, ImageError> {
        let n = pixel_count(width, height)?;
        Ok(Self {
            width,
            height,
            pixels: vec![value; n],
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// Intensity at column `x`, row `y`.
    pub fn get(&self, x: usize, y: usize) -> Option<u8> {
        if x >= self.width || y >= self.height {
            return None;
        }
        Some(self.pixels[y * self.width + x])
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.pixels.chunks_exact(self.width)
    }
}

/// A two-level image produced by thresholding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        check_len(width, height, pixels.len())?;
        if let Some((index, &value)) = pixels
            .iter()
            .enumerate()
            .find(|(_, &v)| v != BACKGROUND && v != FOREGROUND)
        {
            return Err(ImageError::NotBinary { index, value });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Callers guarantee dimensions and alphabet.
    pub(crate) fn from_raw(width: usize, height: usize, pixels: Vec<u8>) -> Self {
        debug_assert_eq!(pixels.len(), width * height);
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Whether the pixel at (`x`, `y`) is foreground.
    pub fn is_foreground(&self, x: usize, y: usize) -> Option<bool> {
        if x >= self.width || y >= self.height {
            return None;
        }
        Some(self.pixels[y * self.width + x] == FOREGROUND)
    }

    pub fn foreground_count(&self) -> usize {
        self.pixels.iter().filter(|&&v| v == FOREGROUND).count()
    }

    /// Reinterprets the binary image as a grayscale one.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.clone(),
        }
    }

    pub fn into_gray(self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels,
        }
    }
}

/// Anything that can be written out as an 8-bit graymap.
pub trait Raster {
    fn width(&self) -> usize;
    fn height(&self) -> usize;
    fn samples(&self) -> &[u8];
}

impl Raster for GrayImage {
    fn width(&self) -> usize {
        self.width
    }
    fn height(&self) -> usize {
        self.height
    }
    fn samples(&self) -> &[u8] {
        &self.pixels
    }
}

impl Raster for BinaryImage {
    fn width(&self) -> usize {
        self.width
    }
    fn height(&self) -> usize {
        self.height
    }
    fn samples(&self) -> &[u8] {
        &self.pixels
    }
}
