mod common;

use std::fs;

use binthresh::report::ReportDocument;
use binthresh::{read_pgm, write_pgm, GrayImage, PgmFlavor};
use common::{listing, run_cli};
use tempfile::TempDir;

fn setup(pixels: &[u8]) -> TempDir {
    let dir = TempDir::new().unwrap();
    let img = GrayImage::new(pixels.len(), 1, pixels.to_vec()).unwrap();
    fs::write(dir.path().join("in.pgm"), write_pgm(&img, PgmFlavor::Plain)).unwrap();
    dir
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn mean_method_writes_binarized_image() {
    let dir = setup(&[10, 20, 30, 40]);
    let out = run_cli(
        dir.path(),
        &["-i", "in.pgm", "-o", "out.pgm", "--method", "mean"],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(stdout(&out), "mean estimate=25 optimum=25 iterations=0\n");
    let bytes = fs::read(dir.path().join("out.pgm")).unwrap();
    assert_eq!(bytes, b"P5\n4 1\n255\n\x00\x00\xff\xff");
}

#[test]
fn iterative_on_constant_image_reports_degenerate_run() {
    let dir = setup(&[7, 7, 7, 7]);
    let out = run_cli(
        dir.path(),
        &[
            "-i",
            "in.pgm",
            "-o",
            "out.pgm",
            "-m",
            "iterative",
            "--ascii",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "iterative estimate=7 optimum=7 iterations=1 degenerate=true\n"
    );
    assert_eq!(
        fs::read(dir.path().join("out.pgm")).unwrap(),
        b"P2\n4 1\n255\n0 0 0 0\n"
    );
}

#[test]
fn compare_writes_both_images_report_and_histograms() {
    let dir = setup(&[0, 0, 0, 100]);
    let out = run_cli(
        dir.path(),
        &[
            "-i",
            "in.pgm",
            "-o",
            "out.pgm",
            "--report",
            "r.json",
            "--histograms",
            "hist",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(
        stdout(&out),
        "mean estimate=25 optimum=25 iterations=0\niterative estimate=25 optimum=50 iterations=2\n"
    );
    assert_eq!(
        listing(dir.path()),
        vec!["hist", "in.pgm", "out.iter.pgm", "out.mean.pgm", "r.json"]
    );
    assert_eq!(
        listing(&dir.path().join("hist")),
        vec!["out.input.csv", "out.iter.csv", "out.mean.csv"]
    );
    let mean_img = read_pgm(&fs::read(dir.path().join("out.mean.pgm")).unwrap()).unwrap();
    assert_eq!(mean_img.pixels(), &[0, 0, 0, 255]);

    let doc: ReportDocument =
        serde_json::from_slice(&fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(doc.estimate_source, "global_mean");
    assert_eq!((doc.image.width, doc.image.height), (4, 1));
    let iter = doc.methods.iterative.unwrap();
    assert_eq!(iter.optimum, 50.0);
    assert_eq!(iter.rounded, 50);
    assert_eq!(iter.iterations.len(), 2);
    assert_eq!(iter.output_path, "out.iter.pgm");
    assert_eq!(
        iter.histogram_output_path.as_deref(),
        Some("hist/out.iter.csv")
    );
    assert_eq!(doc.methods.mean.unwrap().optimum, 25.0);

    let csv = fs::read_to_string(dir.path().join("hist/out.mean.csv")).unwrap();
    assert_eq!(csv.lines().count(), 257);
    assert!(csv.contains("\n0,3\n"));
    assert!(csv.ends_with("255,1\n"));
}

#[test]
fn missing_input_exits_with_io_code() {
    let dir = TempDir::new().unwrap();
    let out = run_cli(
        dir.path(),
        &["-i", "nope.pgm", "-o", "out.pgm", "-m", "mean"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert!(listing(dir.path()).is_empty());
}

#[test]
fn malformed_input_exits_with_format_code() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("in.pgm"), b"P2\n2 2\n255\n0 0 0\n").unwrap();
    let out = run_cli(dir.path(), &["-i", "in.pgm", "-o", "out.pgm", "-m", "mean"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("expected 4 samples, found 3"), "{err}");
    assert_eq!(listing(dir.path()), vec!["in.pgm"]);
}

#[test]
fn argument_errors_exit_with_code_three() {
    let dir = setup(&[1, 2]);
    for args in [
        &["-i", "in.pgm", "-o", "out.pgm"][..],
        &["-i", "in.pgm", "-o", "out.pgm", "-m", "otsu"],
        &["-o", "out.pgm", "-m", "mean"],
        &[
            "-i", "in.pgm", "-o", "out.pgm", "-m", "mean", "--report", "out.pgm",
        ],
    ] {
        let out = run_cli(dir.path(), args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert_eq!(listing(dir.path()), vec!["in.pgm"], "{args:?}");
    }
}

#[test]
fn failed_write_leaves_no_new_files() {
    let dir = setup(&[5, 200]);
    let out = run_cli(
        dir.path(),
        &[
            "-i",
            "in.pgm",
            "-o",
            "out.pgm",
            "--report",
            "missing/r.json",
            "--histograms",
            "h",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(listing(dir.path()), vec!["in.pgm"]);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = setup(&[3, 90, 91, 250, 17, 17, 128]);
    let args = [
        "-i",
        "in.pgm",
        "-o",
        "o.pgm",
        "--report",
        "r.json",
        "--histograms",
        ".",
    ];
    let snapshot = |d: &std::path::Path| -> Vec<(String, Vec<u8>)> {
        listing(d)
            .into_iter()
            .map(|n| {
                let b = fs::read(d.join(&n)).unwrap();
                (n, b)
            })
            .collect()
    };
    let first = run_cli(dir.path(), &args);
    let a = snapshot(dir.path());
    let second = run_cli(dir.path(), &args);
    let b = snapshot(dir.path());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(a, b);
    assert_eq!(a.len(), 7);
}
