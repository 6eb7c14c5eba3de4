#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use binthresh::GrayImage;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    Uniform,
    Bimodal,
}

/// Two triangular modes, one dark and one bright.
fn bimodal_sample<R: Rng>(rng: &mut R, dark: i32, bright: i32, spread: i32, dark_share: f64) -> u8 {
    let centre = if rng.gen_bool(dark_share) {
        dark
    } else {
        bright
    };
    let offset = rng.gen_range(-spread..=spread) + rng.gen_range(-spread..=spread);
    (centre + offset).clamp(0, 255) as u8
}

pub fn random_image<R: Rng>(rng: &mut R, dist: Distribution, max_side: usize) -> GrayImage {
    let w = rng.gen_range(1..=max_side);
    let h = rng.gen_range(1..=max_side);
    let pixels = match dist {
        Distribution::Uniform => (0..w * h).map(|_| rng.gen()).collect(),
        Distribution::Bimodal => {
            let dark = rng.gen_range(10..110);
            let bright = rng.gen_range(140..245);
            let spread = rng.gen_range(1..20);
            let share = rng.gen_range(0.1..0.9);
            (0..w * h)
                .map(|_| bimodal_sample(rng, dark, bright, spread, share))
                .collect()
        }
    };
    GrayImage::new(w, h, pixels).unwrap()
}

pub fn shuffled<R: Rng>(rng: &mut R, image: &GrayImage) -> GrayImage {
    let mut px = image.pixels().to_vec();
    px.shuffle(rng);
    GrayImage::new(image.width(), image.height(), px).unwrap()
}

/// Adds `c` to every pixel; caller guarantees no overflow.
pub fn shifted(image: &GrayImage, c: u8) -> GrayImage {
    let px = image.pixels().iter().map(|&p| p + c).collect();
    GrayImage::new(image.width(), image.height(), px).unwrap()
}

/// Arithmetic mean by a direct pass over the pixels.
pub fn pixel_mean(px: &[u8]) -> f64 {
    let sum: u128 = px.iter().map(|&p| u128::from(p)).sum();
    sum as f64 / px.len() as f64
}

/// Count and mean of the pixels in `[lo, hi]`, by filtering.
pub fn pixel_class(px: &[u8], lo: u8, hi: u8) -> (u64, Option<f64>) {
    let members: Vec<u8> = px.iter().copied().filter(|&p| p >= lo && p <= hi).collect();
    if members.is_empty() {
        (0, None)
    } else {
        (members.len() as u64, Some(pixel_mean(&members)))
    }
}

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_binthresh"))
}

pub fn run_cli(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("failed to spawn binthresh")
}

/// Names of the entries in `dir`, sorted.
pub fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}
