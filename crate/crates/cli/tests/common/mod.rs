#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// Documented invocations and the golden file each must reproduce byte for byte.
pub const GOLDENS: &[(&str, &[&str])] = &[
    (
        "spectrum_a_rest.csv",
        &["spectrum", "--case", "A", "--M", "1", "--omega", "1", "--g", "0", "--a", "0", "--k", "0", "--l", "0", "--nr", "0"],
    ),
    (
        "spectrum_c.csv",
        &[
            "spectrum", "--case", "C", "--M", "1", "--omega", "1", "--g", "0.5", "--a", "1", "--c", "1", "--k", "1", "--nr", "0",
            "--l", "0",
        ],
    ),
    ("wavefunction_a.csv", &["wavefunction", "--case", "A", "--l", "0", "--nr", "0", "--r-max", "3", "--grid-points", "7"]),
    ("sweep_g.csv", &["sweep", "--case", "A", "--a", "1", "--axis", "g", "--start", "0", "--stop", "1", "--steps", "5"]),
    ("normalize_a.json", &["normalize", "--case", "A", "--g", "1", "--a", "1", "--l", "0,1", "--nr", "0,1", "--format", "json"]),
    ("verify_conservation.json", &["verify", "conservation"]),
];

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kgosc"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("kgosc runs")
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Columns of a CSV body, header dropped.
pub fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

pub fn column(text: &str, name: &str) -> Vec<String> {
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).expect("column present");
    csv_rows(text).into_iter().map(|r| r[idx].clone()).collect()
}
