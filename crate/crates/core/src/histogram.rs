//! 256-bin intensity histograms and the means derived from them.
//!
//! All sums are accumulated in integers; a mean is formed by a single
//! division at the end, so the same histogram always yields bit-identical
//! means no matter how it was built.

use thiserror::Error;

use crate::image::GrayImage;

/// Number of intensity levels in an 8-bit image.
pub const LEVELS: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HistogramError {
    #[error("histogram is empty")]
    Empty,
    #[error("invalid intensity range [{lo}, {hi}]: lower bound exceeds upper bound")]
    InvalidRange { lo: u8, hi: u8 },
}

/// Pixel count and intensity sum over a range of levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassStats {
    pub count: u64,
    pub sum: u128,
}

impl ClassStats {
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Mean intensity of the class, `None` when the class holds no pixels.
    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum as f64 / self.count as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Histogram {
    counts: [u64; LEVELS],
    total: u64,
}

impl Default for Histogram {
    fn default() -> Self {
        Self {
            counts: [0; LEVELS],
            total: 0,
        }
    }
}

impl Histogram {
    pub fn from_image(image: &GrayImage) -> Self {
        Self::from_pixels(image.pixels())
    }

    pub fn from_pixels(pixels: &[u8]) -> Self {
        let mut counts = [0u64; LEVELS];
        for &p in pixels {
            counts[p as usize] += 1;
        }
        Self {
            counts,
            total: pixels.len() as u64,
        }
    }

    pub fn from_counts(counts: [u64; LEVELS]) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    pub fn counts(&self) -> &[u64; LEVELS] {
        &self.counts
    }

    pub fn count(&self, level: u8) -> u64 {
        self.counts[level as usize]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Number of levels with a non-zero count.
    pub fn distinct_levels(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Count and intensity sum over the inclusive level range `[lo, hi]`.
    pub fn class_stats(&self, lo: u8, hi: u8) -> Result<ClassStats, HistogramError> {
        if lo > hi {
            return Err(HistogramError::InvalidRange { lo, hi });
        }
        let mut stats = ClassStats::default();
        for v in lo..=hi {
            let c = self.counts[v as usize];
            stats.count += c;
            stats.sum += u128::from(v) * u128::from(c);
        }
        Ok(stats)
    }

    /// Stats over all 256 levels.
    pub fn stats(&self) -> ClassStats {
        self.class_stats(0, 255).expect("full range is valid")
    }

    /// Mean intensity of the whole image.
    pub fn global_mean(&self) -> Result<f64, HistogramError> {
        self.stats().mean().ok_or(HistogramError::Empty)
    }

    /// Mean intensity of the pixels with level in `[lo, hi]`; `Ok(None)`
    /// when no pixel falls in that range.
    pub fn class_mean(&self, lo: u8, hi: u8) -> Result<Option<f64>, HistogramError> {
        Ok(self.class_stats(lo, hi)?.mean())
    }
}

impl From<&GrayImage> for Histogram {
    fn from(image: &GrayImage) -> Self {
        Self::from_image(image)
    }
}
