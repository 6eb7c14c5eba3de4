//! Command-line front end.
//!
//! Loads a PGM, runs one or both threshold procedures, and writes the
//! binarized image(s), optional histogram CSVs and an optional JSON report.
//! Every output is staged in a temporary file next to its destination and
//! only renamed into place once all of them were written, so a failing run
//! leaves no new files behind.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use tempfile::NamedTempFile;
use thiserror::Error;

use crate::histogram::Histogram;
use crate::image::GrayImage;
use crate::pgm::{read_pgm, write_pgm, PgmError, PgmFlavor};
use crate::report::{emit_histogram_csv, emit_report, MethodRun, ReportError, RunReport};
use crate::threshold::{
    binarize_level, iterative_optimum_threshold_from_histogram, mean_threshold_from_histogram,
    Method, ThresholdError, ThresholdResult,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_FORMAT: i32 = 2;
pub const EXIT_ARGUMENT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    /// Global-mean threshold only
    Mean,
    /// Iterative optimum threshold only
    Iterative,
    /// Both methods, one output image each
    Compare,
}

/// Binarize an 8-bit PGM with the global-mean and/or iterative optimum threshold.
#[derive(Debug, Parser)]
#[command(name = "binthresh", version)]
pub struct Args {
    /// Input image (PGM, P2 or P5, maxval 255)
    #[arg(short, long)]
    pub input: PathBuf,
    /// Output image; with `compare`, `.mean.pgm` and `.iter.pgm` variants are written
    #[arg(short, long)]
    pub output: PathBuf,
    /// Threshold selection method
    #[arg(short, long, value_enum, default_value_t = MethodChoice::Compare)]
    pub method: MethodChoice,
    /// Write a JSON report here (required for `compare`)
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Write input and output histogram CSVs into this directory
    #[arg(long, value_name = "DIR")]
    pub histograms: Option<PathBuf>,
    /// Write plain-text P2 instead of raw P5
    #[arg(long)]
    pub ascii: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub input_path: PathBuf,
    pub output_path: PathBuf,
    pub method: MethodChoice,
    pub report_path: Option<PathBuf>,
    pub histogram_dir: Option<PathBuf>,
    pub flavor: PgmFlavor,
}

impl CliConfig {
    pub fn new(input_path: impl Into<PathBuf>, output_path: impl Into<PathBuf>) -> Self {
        Self {
            input_path: input_path.into(),
            output_path: output_path.into(),
            method: MethodChoice::Compare,
            report_path: None,
            histogram_dir: None,
            flavor: PgmFlavor::Raw,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.method == MethodChoice::Compare && self.report_path.is_none() {
            return Err(CliError::Argument(
                "--method compare requires --report".to_string(),
            ));
        }
        Ok(())
    }
}

impl From<Args> for CliConfig {
    fn from(args: Args) -> Self {
        Self {
            input_path: args.input,
            output_path: args.output,
            method: args.method,
            report_path: args.report,
            histogram_dir: args.histograms,
            flavor: if args.ascii {
                PgmFlavor::Plain
            } else {
                PgmFlavor::Raw
            },
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: PgmError },
    #[error("{0}")]
    Argument(String),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Report(#[from] ReportError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Threshold(_) | CliError::Report(_) => EXIT_IO,
            CliError::Format { .. } => EXIT_FORMAT,
            CliError::Argument(_) => EXIT_ARGUMENT,
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// `out.pgm` -> `out.<tag>.pgm`; a missing or different extension is kept
/// and `.<tag>.pgm` appended.
fn tagged_path(path: &Path, tag: &str) -> PathBuf {
    let mut name: OsString = match path.extension() {
        Some(ext) if ext.eq_ignore_ascii_case("pgm") => {
            path.file_stem().unwrap_or_default().to_owned()
        }
        _ => path.file_name().unwrap_or_default().to_owned(),
    };
    name.push(format!(".{tag}.pgm"));
    path.with_file_name(name)
}

fn output_stem(path: &Path) -> String {
    let name = match path.extension() {
        Some(ext) if ext.eq_ignore_ascii_case("pgm") => path.file_stem(),
        _ => path.file_name(),
    };
    name.map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".to_string())
}

fn method_tag(method: Method) -> &'static str {
    match method {
        Method::Mean => "mean",
        Method::Iterative => "iter",
    }
}

/// The stable one-line stdout summary of a result.
pub fn summary_line(result: &ThresholdResult) -> String {
    let mut line = format!(
        "{} estimate={} optimum={} iterations={}",
        result.method,
        result.estimate,
        result.optimum,
        result.iterations.len()
    );
    if result.degenerate {
        line.push_str(" degenerate=true");
    }
    line
}

/// Output file contents keyed by destination, in write order.
struct Staged {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Staged {
    fn push(&mut self, path: PathBuf, bytes: Vec<u8>) -> Result<(), CliError> {
        if self.files.iter().any(|(p, _)| p == &path) {
            return Err(CliError::Argument(format!(
                "output path {} is used for more than one file",
                path.display()
            )));
        }
        self.files.push((path, bytes));
        Ok(())
    }

    /// Writes all files or none of the previously missing ones.
    fn commit(self, created_dir: Option<&Path>) -> Result<(), CliError> {
        let mut fresh: Vec<PathBuf> = Vec::new();
        let result = (|| {
            let mut temps = Vec::with_capacity(self.files.len());
            for (path, bytes) in &self.files {
                let dir = match path.parent() {
                    Some(p) if !p.as_os_str().is_empty() => p,
                    _ => Path::new("."),
                };
                let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
                tmp.write_all(bytes)
                    .and_then(|_| tmp.flush())
                    .map_err(|e| CliError::io(path, e))?;
                temps.push((path, tmp));
            }
            for (path, tmp) in temps {
                let existed = path.exists();
                tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
                if !existed {
                    fresh.push(path.clone());
                }
            }
            Ok(())
        })();
        if result.is_err() {
            for path in &fresh {
                let _ = fs::remove_file(path);
            }
            if let Some(dir) = created_dir {
                let _ = fs::remove_dir(dir);
            }
        }
        result
    }
}

/// Runs one invocation, writing the summary lines to `stdout`.
pub fn run<W: Write>(config: &CliConfig, stdout: &mut W) -> Result<(), CliError> {
    config.validate()?;

    let bytes = fs::read(&config.input_path).map_err(|e| CliError::io(&config.input_path, e))?;
    let image: GrayImage = read_pgm(&bytes).map_err(|source| CliError::Format {
        path: config.input_path.clone(),
        source,
    })?;
    let hist = Histogram::from_image(&image);

    let methods: &[Method] = match config.method {
        MethodChoice::Mean => &[Method::Mean],
        MethodChoice::Iterative => &[Method::Iterative],
        MethodChoice::Compare => &[Method::Mean, Method::Iterative],
    };

    let mut staged = Staged { files: Vec::new() };
    let stem = output_stem(&config.output_path);
    let histogram_input_path = config
        .histogram_dir
        .as_ref()
        .map(|dir| dir.join(format!("{stem}.input.csv")));
    if let Some(path) = &histogram_input_path {
        staged.push(path.clone(), emit_histogram_csv(&hist))?;
    }

    let mut mean_run = None;
    let mut iterative_run = None;
    for &method in methods {
        let result = match method {
            Method::Mean => mean_threshold_from_histogram(&hist)?,
            Method::Iterative => iterative_optimum_threshold_from_histogram(&hist)?,
        };
        let binary = binarize_level(&image, &result.optimum);
        let output_path = if config.method == MethodChoice::Compare {
            tagged_path(&config.output_path, method_tag(method))
        } else {
            config.output_path.clone()
        };
        staged.push(output_path.clone(), write_pgm(&binary, config.flavor))?;

        let histogram_output_path = match &config.histogram_dir {
            Some(dir) => {
                let path = dir.join(format!("{stem}.{}.csv", method_tag(method)));
                let out_hist = Histogram::from_pixels(binary.pixels());
                staged.push(path.clone(), emit_histogram_csv(&out_hist))?;
                Some(path.display().to_string())
            }
            None => None,
        };
        let run = MethodRun {
            result,
            output_path: output_path.display().to_string(),
            histogram_output_path,
        };
        match method {
            Method::Mean => mean_run = Some(run),
            Method::Iterative => iterative_run = Some(run),
        }
    }

    let report = RunReport::new(
        config.input_path.display().to_string(),
        &image,
        histogram_input_path.map(|p| p.display().to_string()),
        mean_run,
        iterative_run,
    )?;
    if let Some(path) = &config.report_path {
        staged.push(path.clone(), emit_report(&report))?;
    }

    let mut created_dir = None;
    if let Some(dir) = &config.histogram_dir {
        if !dir.exists() {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            created_dir = Some(dir.as_path());
        }
    }
    staged.commit(created_dir)?;

    let mut lines = String::new();
    for run in [report.mean(), report.iterative()].into_iter().flatten() {
        lines.push_str(&summary_line(&run.result));
        lines.push('\n');
    }
    stdout
        .write_all(lines.as_bytes())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
    Ok(())
}

/// Parses `argv` and runs; returns the process exit code.
pub fn main_with_args<I, T, W, E>(argv: I, stdout: &mut W, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(err) => {
            use clap::error::ErrorKind;
            let rendered = err.render().to_string();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_ARGUMENT
                }
            };
        }
    };
    let config = CliConfig::from(args);
    match run(&config, stdout) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let _ = writeln!(stderr, "binthresh: error: {err}");
            err.exit_code()
        }
    }
}
