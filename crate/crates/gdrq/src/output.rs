//! CSV writers. Every float goes through [`sig9`].

use std::fs::File;
use std::io::Write;
use std::path::Path;

use gdrq_core::experiment::{BasisRow, Comparison, MadSeries, RunRecord};
use gdrq_core::response::ResponseSpectrum;

use crate::error::CliError;

/// Nine significant digits, `%.9g` style: fixed notation for exponents in
/// `-4..9`, scientific otherwise, trailing zeros dropped.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mant.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(f))
}

fn finish(mut w: csv::Writer<File>, path: &Path) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_spectrum(path: &Path, s: &ResponseSpectrum) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record([
        "E", "ImR0_x", "ImR0_y", "ImR0_z", "ImR_x", "ImR_y", "ImR_z", "sigma_raw", "sigma_calibrated",
    ])?;
    for (i, &e) in s.energies.iter().enumerate() {
        let mut rec = vec![sig9(e)];
        rec.extend(s.r0.iter().map(|r| sig9(r[i].im)));
        rec.extend(s.r_dressed.iter().map(|r| sig9(r[i].im)));
        rec.push(sig9(s.sigma_raw[i]));
        rec.push(sig9(s.sigma[i]));
        w.write_record(&rec)?;
    }
    finish(w, path)
}

pub fn write_runs(path: &Path, runs: &[RunRecord]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(["run_index", "seed", "E0"])?;
    for r in runs {
        w.write_record([r.run_index.to_string(), r.seed.to_string(), sig9(r.e0)])?;
    }
    finish(w, path)
}

pub fn write_mad_series(path: &Path, series: &MadSeries) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(["m", "E0_median", "delta_E0"])?;
    for p in &series.points {
        w.write_record([p.m.to_string(), sig9(p.e0_median), sig9(p.delta_e0)])?;
    }
    finish(w, path)
}

pub fn write_basis_study(path: &Path, rows: &[BasisRow]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(["label", "n_min", "n_max", "E0", "width"])?;
    for r in rows {
        w.write_record([
            r.label.clone(),
            r.window.n_min().to_string(),
            r.window.n_max().to_string(),
            sig9(r.e0),
            sig9(r.width),
        ])?;
    }
    finish(w, path)
}

pub fn write_comparison(path: &Path, c: &Comparison) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(["E", "sigma_model", "sigma_exp"])?;
    for r in &c.rows {
        w.write_record([sig9(r.energy), sig9(r.sigma_model), sig9(r.sigma_exp)])?;
    }
    finish(w, path)
}

pub fn create_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

/// Writes `text` to `path`, replacing any previous file.
pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    let mut f = File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))
}
