//! Threshold selection and binarization.
//!
//! Two selection procedures are provided:
//!
//! * [`mean_threshold`] uses the global intensity mean directly.
//! * [`iterative_optimum_threshold`] starts from the global mean and repeatedly
//!   replaces the threshold `T` with the midpoint of the two class means
//!   `m1` (levels `<= T`) and `m2` (levels `> T`) until `|T - (m1 + m2) / 2| < 1`.
//!
//! Thresholds are carried as exact rationals ([`Level`]), so the iteration
//! trace, the convergence test and the class split never depend on
//! floating-point rounding. [`binarize`] maps pixels `> T` to 255 and
//! pixels `<= T` to 0.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::histogram::{ClassStats, Histogram, HistogramError};
use crate::image::{BinaryImage, GrayImage, BACKGROUND, FOREGROUND};

/// Hard cap on iterative refinement steps.
pub const MAX_ITERATIONS: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThresholdError {
    #[error("cannot select a threshold for an image without pixels")]
    EmptyInput,
    #[error("threshold {0} is outside [0, 255]")]
    OutOfRange(f64),
    #[error("iterative threshold did not converge within {} steps", MAX_ITERATIONS)]
    NonConvergence { trace: Vec<IterationStep> },
}

impl From<HistogramError> for ThresholdError {
    fn from(err: HistogramError) -> Self {
        match err {
            HistogramError::Empty => ThresholdError::EmptyInput,
            // Only produced by a bad internal range; surfaced as an empty input.
            HistogramError::InvalidRange { .. } => ThresholdError::EmptyInput,
        }
    }
}

/// An exact, non-negative gray level.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(BigRational);

impl Level {
    pub fn from_integer(value: u64) -> Self {
        Level(BigRational::from_integer(BigInt::from(value)))
    }

    /// `numer / denom`; `None` when `denom` is zero.
    pub fn ratio(numer: u128, denom: u64) -> Option<Self> {
        (denom != 0).then(|| Level(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    /// Mean intensity of a class, `None` for an empty class.
    pub fn class_mean(stats: &ClassStats) -> Option<Self> {
        Self::ratio(stats.sum, stats.count)
    }

    pub fn midpoint(a: &Level, b: &Level) -> Level {
        Level((&a.0 + &b.0) / BigInt::from(2))
    }

    /// Nearest `f64` to the exact value.
    pub fn value(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Largest integer level not above this one, clamped to 255.
    pub fn floor_level(&self) -> u8 {
        self.0
            .floor()
            .to_integer()
            .to_u8()
            .unwrap_or(if self.0.is_negative() { 0 } else { 255 })
    }

    /// Rounded to the nearest integer, halves rounding up.
    pub fn rounded(&self) -> u8 {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Level(&self.0 + half).floor_level()
    }

    /// Whether `|self - other| < 1`.
    pub fn within_one(&self, other: &Level) -> bool {
        (&self.0 - &other.0).abs() < BigRational::one()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl Add<u8> for &Level {
    type Output = Level;

    fn add(self, rhs: u8) -> Level {
        Level(&self.0 + BigInt::from(rhs))
    }
}

impl fmt::Debug for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Level({} = {})", self.0, self.value())
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl PartialEq<f64> for Level {
    fn eq(&self, other: &f64) -> bool {
        self.value() == *other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Mean,
    Iterative,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Mean => "mean",
            Method::Iterative => "iterative",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One pass of the iterative procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationStep {
    /// Threshold entering the step.
    pub estimate: Level,
    /// Mean of levels `<= estimate`.
    pub m1: Option<Level>,
    /// Mean of levels `> estimate`.
    pub m2: Option<Level>,
    /// `(m1 + m2) / 2`; absent when either class is empty.
    pub total_mean: Option<Level>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub method: Method,
    pub estimate: Level,
    pub optimum: Level,
    pub iterations: Vec<IterationStep>,
    pub converged: bool,
    /// An empty class stopped the iteration.
    pub degenerate: bool,
}

/// Applies `T` to every pixel: `> T` becomes 255, `<= T` becomes 0.
pub fn binarize(image: &GrayImage, threshold: f64) -> Result<BinaryImage, ThresholdError> {
    if !(0.0..=255.0).contains(&threshold) {
        return Err(ThresholdError::OutOfRange(threshold));
    }
    let mut lut = [BACKGROUND; 256];
    for (v, out) in lut.iter_mut().enumerate() {
        if v as f64 > threshold {
            *out = FOREGROUND;
        }
    }
    Ok(apply_lut(image, &lut))
}

/// [`binarize`] with an exact threshold.
pub fn binarize_level(image: &GrayImage, threshold: &Level) -> BinaryImage {
    let cut = threshold.floor_level();
    let mut lut = [BACKGROUND; 256];
    for out in lut.iter_mut().skip(cut as usize + 1) {
        *out = FOREGROUND;
    }
    apply_lut(image, &lut)
}

fn apply_lut(image: &GrayImage, lut: &[u8; 256]) -> BinaryImage {
    let pixels = image.pixels().iter().map(|&p| lut[p as usize]).collect();
    BinaryImage::from_raw(image.width(), image.height(), pixels)
}

fn global_mean_level(hist: &Histogram) -> Result<Level, ThresholdError> {
    Level::class_mean(&hist.stats()).ok_or(ThresholdError::EmptyInput)
}

/// Global-mean thresholding.
pub fn mean_threshold(image: &GrayImage) -> Result<ThresholdResult, ThresholdError> {
    mean_threshold_from_histogram(&Histogram::from_image(image))
}

pub fn mean_threshold_from_histogram(hist: &Histogram) -> Result<ThresholdResult, ThresholdError> {
    let mean = global_mean_level(hist)?;
    Ok(ThresholdResult {
        method: Method::Mean,
        estimate: mean.clone(),
        optimum: mean,
        iterations: Vec::new(),
        converged: true,
        degenerate: false,
    })
}

/// Iterative optimum threshold selection seeded with the global mean.
pub fn iterative_optimum_threshold(image: &GrayImage) -> Result<ThresholdResult, ThresholdError> {
    iterative_optimum_threshold_from_histogram(&Histogram::from_image(image))
}

pub fn iterative_optimum_threshold_from_histogram(
    hist: &Histogram,
) -> Result<ThresholdResult, ThresholdError> {
    let estimate = global_mean_level(hist)?;
    let mut current = estimate.clone();
    let mut trace = Vec::new();

    while trace.len() < MAX_ITERATIONS {
        let split = current.floor_level();
        let low = hist.class_stats(0, split)?;
        let high = match split.checked_add(1) {
            Some(lo) => hist.class_stats(lo, 255)?,
            None => ClassStats::default(),
        };
        let m1 = Level::class_mean(&low);
        let m2 = Level::class_mean(&high);

        let (Some(a), Some(b)) = (&m1, &m2) else {
            trace.push(IterationStep {
                estimate: current.clone(),
                m1,
                m2,
                total_mean: None,
            });
            return Ok(ThresholdResult {
                method: Method::Iterative,
                estimate,
                optimum: current,
                iterations: trace,
                converged: false,
                degenerate: true,
            });
        };

        let total_mean = Level::midpoint(a, b);
        let done = current.within_one(&total_mean);
        trace.push(IterationStep {
            estimate: current,
            m1,
            m2,
            total_mean: Some(total_mean.clone()),
        });
        if done {
            return Ok(ThresholdResult {
                method: Method::Iterative,
                estimate,
                optimum: total_mean,
                iterations: trace,
                converged: true,
                degenerate: false,
            });
        }
        current = total_mean;
    }
    Err(ThresholdError::NonConvergence { trace })
}

/// Every integer split `t` with both classes `[0, t]` and `[t + 1, 255]`
/// non-empty and `|t - (m1(t) + m2(t)) / 2| < 1`, found by exhaustive scan.
///
/// Works directly on the bin counts in big-integer arithmetic and shares no
/// code with the iterative procedure, so it can be used to check it.
pub fn fixed_point_oracle(hist: &Histogram) -> BTreeSet<u8> {
    let counts = hist.counts();
    let n: u128 = counts.iter().map(|&c| u128::from(c)).sum();
    let s: u128 = counts
        .iter()
        .enumerate()
        .map(|(v, &c)| v as u128 * u128::from(c))
        .sum();
    let mut found = BTreeSet::new();
    let (mut n1, mut s1) = (0u128, 0u128);
    for (t, &c) in counts.iter().enumerate().take(255) {
        n1 += u128::from(c);
        s1 += t as u128 * u128::from(c);
        let (n2, s2) = (n - n1, s - s1);
        if n1 == 0 || n2 == 0 {
            continue;
        }
        // |t - (s1/n1 + s2/n2)/2| < 1  <=>  |2 t n1 n2 - (s1 n2 + s2 n1)| < 2 n1 n2
        let (n1, n2) = (BigInt::from(n1), BigInt::from(n2));
        let scale = BigInt::from(2u8) * &n1 * &n2;
        let lhs = BigInt::from(t) * &scale;
        let rhs = BigInt::from(s1) * &n2 + BigInt::from(s2) * &n1;
        if (lhs - rhs).abs().cmp(&scale) == Ordering::Less {
            found.insert(t as u8);
        }
    }
    found
}
