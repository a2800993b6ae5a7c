//! Experimental photoabsorption spectra.
//!
//! Files are two-column CSV (`energy_mev,sigma_mb`) with optional leading
//! `# key: value` comment lines. A `source` line becomes the spectrum's
//! provenance string.

use std::path::{Path, PathBuf};

use gdrq_core::experiment::ExperimentalSpectrum;
use serde::Deserialize;

use crate::error::CliError;

const SN120: &str = include_str!("../data/sn120_gdr.csv");
const PB208: &str = include_str!("../data/pb208_gdr.csv");

/// Bundled spectra as `(A, Z, file name, contents)`.
pub const BUNDLED: [(u32, u32, &str, &str); 2] = [
    (120, 50, "sn120_gdr.csv", SN120),
    (208, 82, "pb208_gdr.csv", PB208),
];

#[derive(Debug, Deserialize)]
struct Row {
    energy_mev: f64,
    sigma_mb: f64,
}

fn provenance(text: &str) -> Option<String> {
    text.lines()
        .take_while(|l| l.starts_with('#'))
        .filter_map(|l| l.trim_start_matches('#').trim().strip_prefix("source:"))
        .map(|s| s.trim().to_string())
        .next()
}

pub fn parse_spectrum(text: &str, path: &Path) -> Result<ExperimentalSpectrum, CliError> {
    let bad = |message: String| CliError::Data {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut energies = Vec::new();
    let mut sigma = Vec::new();
    for row in reader.deserialize() {
        let row: Row = row.map_err(|e| bad(e.to_string()))?;
        if !row.energy_mev.is_finite() || !row.sigma_mb.is_finite() || row.sigma_mb < 0.0 {
            return Err(bad(format!("bad point ({}, {})", row.energy_mev, row.sigma_mb)));
        }
        energies.push(row.energy_mev);
        sigma.push(row.sigma_mb);
    }
    let source = provenance(text).unwrap_or_else(|| path.display().to_string());
    ExperimentalSpectrum::new(energies, sigma, source).map_err(|e| bad(e.to_string()))
}

pub fn load_spectrum(path: &Path) -> Result<ExperimentalSpectrum, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_spectrum(&text, path)
}

pub fn bundled_spectrum(a: u32, z: u32) -> Option<ExperimentalSpectrum> {
    BUNDLED
        .iter()
        .find(|(ba, bz, _, _)| *ba == a && *bz == z)
        .map(|(_, _, name, text)| {
            parse_spectrum(text, &PathBuf::from(name)).expect("bundled data is well formed")
        })
}
