//! PGM (portable graymap) reading and writing.
//!
//! Supports the plain (`P2`) and raw (`P5`) variants with `maxval = 255`.
//! Header comments (`#` to end of line) are skipped. The payload must hold
//! exactly `width * height` samples; short or over-long payloads are errors.

use std::fmt::Write as _;

use thiserror::Error;

use crate::image::{pixel_count, GrayImage, ImageError, Raster};

const MAXVAL: u64 = 255;

/// Which PGM variant to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PgmFlavor {
    /// `P2`, decimal samples, one image row per line.
    Plain,
    /// `P5`, one byte per sample.
    #[default]
    Raw,
}

impl PgmFlavor {
    pub fn magic(self) -> &'static str {
        match self {
            PgmFlavor::Plain => "P2",
            PgmFlavor::Raw => "P5",
        }
    }
}

/// Coarse classification of [`PgmError`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmErrorKind {
    Format,
    UnsupportedDepth,
    Truncation,
    Range,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PgmError {
    #[error("not a grayscale PGM: magic {found:?} (expected \"P2\" or \"P5\")")]
    BadMagic { found: String },
    #[error("malformed PGM header: {0}")]
    Header(String),
    #[error("invalid image geometry: {0}")]
    Geometry(#[from] ImageError),
    #[error("unsupported maxval {maxval}: only 8-bit images (maxval 255) are accepted")]
    UnsupportedDepth { maxval: u64 },
    #[error("truncated pixel data: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("trailing data after pixel payload: expected {expected} samples, found {found}")]
    TrailingData { expected: usize, found: usize },
    #[error("sample {index} has value {value}, above maxval {maxval}")]
    Range {
        index: usize,
        value: u64,
        maxval: u64,
    },
    #[error("sample {index} is not a decimal number: {token:?}")]
    BadSample { index: usize, token: String },
}

impl PgmError {
    pub fn kind(&self) -> PgmErrorKind {
        match self {
            PgmError::UnsupportedDepth { .. } => PgmErrorKind::UnsupportedDepth,
            PgmError::Truncated { .. } => PgmErrorKind::Truncation,
            PgmError::Range { .. } => PgmErrorKind::Range,
            PgmError::BadMagic { .. }
            | PgmError::Header(_)
            | PgmError::Geometry(_)
            | PgmError::TrailingData { .. }
            | PgmError::BadSample { .. } => PgmErrorKind::Format,
        }
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.data.get(self.pos).copied()
    }

    fn rest(&self) -> &'a [u8] {
        &self.data[self.pos..]
    }

    /// Skips whitespace and `#` comments, returning whether anything was skipped.
    fn skip_separators(&mut self) -> bool {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(c) = self.peek() {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
        self.pos != start
    }

    fn header_number(&mut self, what: &str) -> Result<u64, PgmError> {
        if !self.skip_separators() {
            return Err(PgmError::Header(format!(
                "expected whitespace before {what}"
            )));
        }
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(b @ b'0'..=b'9') = self.peek() {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(b - b'0')))
                .ok_or_else(|| PgmError::Header(format!("{what} does not fit in 64 bits")))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(match self.peek() {
                None => PgmError::Header(format!("missing {what}")),
                Some(b) => {
                    PgmError::Header(format!("expected decimal {what}, found byte 0x{b:02x}"))
                }
            });
        }
        Ok(value)
    }
}

fn dimension(value: u64, what: &str) -> Result<usize, PgmError> {
    usize::try_from(value).map_err(|_| PgmError::Header(format!("{what} {value} too large")))
}

/// Decodes a `P2` or `P5` graymap.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    let flavor = match bytes.get(..2) {
        Some(b"P2") => PgmFlavor::Plain,
        Some(b"P5") => PgmFlavor::Raw,
        other => {
            let found = String::from_utf8_lossy(other.unwrap_or(bytes)).into_owned();
            return Err(PgmError::BadMagic { found });
        }
    };
    let mut cur = Cursor {
        data: bytes,
        pos: 2,
    };
    let width = dimension(cur.header_number("width")?, "width")?;
    let height = dimension(cur.header_number("height")?, "height")?;
    let maxval = cur.header_number("maxval")?;
    let expected = pixel_count(width, height)?;
    if maxval != MAXVAL {
        return Err(PgmError::UnsupportedDepth { maxval });
    }

    let pixels = match flavor {
        PgmFlavor::Raw => {
            // Exactly one whitespace byte separates the header from the raster.
            match cur.peek() {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                Some(b) => {
                    return Err(PgmError::Header(format!(
                        "expected single whitespace after maxval, found byte 0x{b:02x}"
                    )))
                }
                None => return Err(PgmError::Truncated { expected, found: 0 }),
            }
            let raster = cur.rest();
            if raster.len() < expected {
                return Err(PgmError::Truncated {
                    expected,
                    found: raster.len(),
                });
            }
            if raster.len() > expected {
                return Err(PgmError::TrailingData {
                    expected,
                    found: raster.len(),
                });
            }
            raster.to_vec()
        }
        PgmFlavor::Plain => {
            match cur.peek() {
                Some(b) if !b.is_ascii_whitespace() => {
                    return Err(PgmError::Header(format!(
                        "expected whitespace after maxval, found byte 0x{b:02x}"
                    )))
                }
                _ => {}
            }
            read_plain_samples(cur.rest(), expected)?
        }
    };
    Ok(GrayImage::new(width, height, pixels)?)
}

fn read_plain_samples(raster: &[u8], expected: usize) -> Result<Vec<u8>, PgmError> {
    let mut pixels = Vec::with_capacity(expected);
    let tokens = raster
        .split(|b| b.is_ascii_whitespace())
        .filter(|t| !t.is_empty());
    let mut found = 0usize;
    for token in tokens {
        let index = found;
        found += 1;
        if index >= expected {
            // keep counting so the error reports the real payload size
            continue;
        }
        if !token.iter().all(u8::is_ascii_digit) {
            return Err(PgmError::BadSample {
                index,
                token: String::from_utf8_lossy(token).into_owned(),
            });
        }
        let value = token.iter().fold(0u64, |acc, &d| {
            acc.saturating_mul(10).saturating_add(u64::from(d - b'0'))
        });
        if value > MAXVAL {
            return Err(PgmError::Range {
                index,
                value,
                maxval: MAXVAL,
            });
        }
        pixels.push(value as u8);
    }
    if found < expected {
        return Err(PgmError::Truncated { expected, found });
    }
    if found > expected {
        return Err(PgmError::TrailingData { expected, found });
    }
    Ok(pixels)
}

/// Encodes an image as PGM with `maxval = 255`.
pub fn write_pgm<R: Raster + ?Sized>(image: &R, flavor: PgmFlavor) -> Vec<u8> {
    let header = format!(
        "{}\n{} {}\n{}\n",
        flavor.magic(),
        image.width(),
        image.height(),
        MAXVAL
    );
    match flavor {
        PgmFlavor::Raw => {
            let mut out = Vec::with_capacity(header.len() + image.samples().len());
            out.extend_from_slice(header.as_bytes());
            out.extend_from_slice(image.samples());
            out
        }
        PgmFlavor::Plain => {
            let mut text = header;
            text.reserve(image.samples().len() * 4);
            for row in image.samples().chunks_exact(image.width()) {
                for (i, v) in row.iter().enumerate() {
                    if i > 0 {
                        text.push(' ');
                    }
                    let _ = write!(text, "{v}");
                }
                text.push('\n');
            }
            text.into_bytes()
        }
    }
}
