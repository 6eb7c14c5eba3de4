//! Grayscale image binarization by global-mean and iterative optimum
//! threshold selection.
//!
//! ```
//! use binthresh::{iterative_optimum_threshold, binarize_level, GrayImage};
//!
//! let img = GrayImage::new(4, 1, vec![0, 0, 0, 100]).unwrap();
//! let result = iterative_optimum_threshold(&img).unwrap();
//! assert_eq!(result.optimum.value(), 50.0);
//! assert_eq!(binarize_level(&img, &result.optimum).pixels(), &[0, 0, 0, 255]);
//! ```

pub mod cli;
pub mod histogram;
pub mod image;
pub mod pgm;
pub mod report;
pub mod threshold;

pub use histogram::{ClassStats, Histogram, HistogramError};
pub use image::{BinaryImage, GrayImage, ImageError, Raster};
pub use pgm::{read_pgm, write_pgm, PgmError, PgmErrorKind, PgmFlavor};
pub use threshold::{
    binarize, binarize_level, fixed_point_oracle, iterative_optimum_threshold,
    iterative_optimum_threshold_from_histogram, mean_threshold, mean_threshold_from_histogram,
    IterationStep, Level, Method, ThresholdError, ThresholdResult,
};
