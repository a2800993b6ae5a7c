//! Argument parsing and subcommand dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gdrq_core::encoding::NucleusConfig;
use gdrq_core::experiment::{basis_study, compare_with_experiment, mad, median, run_classical, RunRecord};
use gdrq_core::response::ResponseSpectrum;

use crate::config::{config_to_toml, parse_windows, ConfigFile};
use crate::error::CliError;
use crate::{data, output, parallel, selftest};

const TABLE_BASES: &str = "0-10,2-8,3-6,4-6,4-5";

#[derive(Debug, Parser)]
#[command(name = "gdrq", version, about = "Giant dipole resonance spectra from classical and simulated quantum linear response")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Independent-particle response and cross section.
    Classical(Common),
    /// Repeated quantum runs; writes runs.csv and the median run's spectrum.
    Quantum(Common),
    /// Classical peak and width across basis windows.
    BasisStudy {
        #[command(flatten)]
        common: Common,
        /// Comma-separated windows such as 0-10,3-6.
        #[arg(long, default_value = TABLE_BASES)]
        bases: String,
    },
    /// Median peak energy and its MAD as a function of the number of runs.
    ErrorStudy(Common),
    /// Compare a model spectrum with measured data.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Two-column CSV (energy_mev,sigma_mb); bundled data is used when omitted.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Pipeline::Quantum)]
        pipeline: Pipeline,
    },
    /// Fast invariant checks.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pipeline {
    Classical,
    Quantum,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Master seed; run i draws from stream i.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub shots: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub runs: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    /// Lorentzian spreading width, MeV.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_spread: Option<f64>,
    /// Basis window, e.g. 3-6.
    #[arg(long)]
    pub basis: Option<String>,
    /// Analytic probabilities instead of sampled shots.
    #[arg(long)]
    pub exact: bool,
    /// Config override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn positive(name: &str, v: Option<i64>) -> Result<Option<i64>, CliError> {
    match v {
        Some(n) if n < 1 => Err(CliError::Validation(format!("--{name} must be at least 1, got {n}"))),
        _ => Ok(v),
    }
}

fn override_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key just written"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

impl Common {
    /// Config file merged with `--set` overrides and then the dedicated flags.
    pub fn resolve(&self) -> Result<NucleusConfig, CliError> {
        let shots = positive("shots", self.shots)?;
        let runs = positive("runs", self.runs)?;
        let path = &self.config;
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let config_err = |message: String| CliError::Config {
            path: path.clone(),
            message,
        };
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| config_err(e.message().to_string()))?;
        for o in &self.overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("override {o:?} is not KEY=VALUE")))?;
            table.insert(k.trim().to_string(), override_value(v.trim()));
        }
        let mut set = |k: &str, v: toml::Value| {
            table.insert(k.to_string(), v);
        };
        if let Some(n) = shots {
            set("shots", toml::Value::Integer(n));
        }
        if let Some(n) = runs {
            set("runs", toml::Value::Integer(n));
        }
        if let Some(x) = self.kappa {
            set("kappa", toml::Value::Float(x));
        }
        if let Some(x) = self.gamma_spread {
            set("gamma_spread", toml::Value::Float(x));
        }
        if let Some(b) = &self.basis {
            set("basis", toml::Value::String(b.clone()));
        }
        if self.exact {
            set("exact", toml::Value::Boolean(true));
        }
        let file: ConfigFile = table.try_into().map_err(|e: toml::de::Error| config_err(e.message().to_string()))?;
        file.to_config().map_err(|e| config_err(e.to_string()))
    }
}

fn say(out: &mut dyn Write, line: String) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::io("<stdout>", e))
}

fn prepare_out(common: &Common, config: &NucleusConfig) -> Result<PathBuf, CliError> {
    output::create_dir(&common.out)?;
    output::write_text(&common.out.join("config.toml"), &config_to_toml(config))?;
    Ok(common.out.clone())
}

/// Index of the run whose peak is the lower median.
fn median_run(runs: &[RunRecord]) -> &RunRecord {
    let mut order: Vec<usize> = (0..runs.len()).collect();
    order.sort_by(|&i, &j| runs[i].e0.total_cmp(&runs[j].e0).then(i.cmp(&j)));
    &runs[order[(runs.len() - 1) / 2]]
}

fn run_summary(runs: &[RunRecord], out: &mut dyn Write) -> Result<(), CliError> {
    let e0: Vec<f64> = runs.iter().map(|r| r.e0).collect();
    say(
        out,
        format!(
            "runs {}  median E0 {} MeV  MAD {} MeV",
            runs.len(),
            output::sig9(median(&e0)?),
            output::sig9(mad(&e0)?)
        ),
    )
}

fn spectrum_summary(s: &ResponseSpectrum, out: &mut dyn Write) -> Result<(), CliError> {
    say(
        out,
        format!(
            "E0 {} MeV  FWHM {} MeV",
            output::sig9(s.peak_e0),
            output::sig9(s.width_fwhm)
        ),
    )
}

fn quantum_runs(config: &NucleusConfig, seed: u64) -> Result<Vec<RunRecord>, CliError> {
    parallel::run_many(config, config.runs, seed)
}

fn classical(common: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let config = common.resolve()?;
    let s = run_classical(&config)?;
    let dir = prepare_out(common, &config)?;
    output::write_spectrum(&dir.join("spectrum.csv"), &s)?;
    spectrum_summary(&s, out)
}

fn quantum(common: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let config = common.resolve()?;
    let runs = quantum_runs(&config, common.seed)?;
    let dir = prepare_out(common, &config)?;
    output::write_runs(&dir.join("runs.csv"), &runs)?;
    let m = median_run(&runs);
    output::write_spectrum(&dir.join("spectrum.csv"), &m.spectrum)?;
    run_summary(&runs, out)?;
    say(out, format!("median run {}", m.run_index))?;
    spectrum_summary(&m.spectrum, out)
}

fn basis(common: &Common, bases: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let config = common.resolve()?;
    let windows = parse_windows(bases).map_err(|e| CliError::Validation(format!("--bases: {e}")))?;
    let rows = basis_study(&config, &windows)?;
    let dir = prepare_out(common, &config)?;
    output::write_basis_study(&dir.join("basis_study.csv"), &rows)?;
    for r in &rows {
        say(
            out,
            format!(
                "{:<8} N={}  E0 {} MeV  width {} MeV",
                r.label,
                r.window,
                output::sig9(r.e0),
                output::sig9(r.width)
            ),
        )?;
    }
    Ok(())
}

fn error_study(common: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let config = common.resolve()?;
    let (runs, series) = parallel::error_vs_runs(&config, config.runs, common.seed)?;
    let dir = prepare_out(common, &config)?;
    output::write_runs(&dir.join("runs.csv"), &runs)?;
    output::write_mad_series(&dir.join("mad_series.csv"), &series)?;
    let last = series.last();
    let worst = series.points.iter().map(|p| p.delta_e0).fold(0.0, f64::max);
    say(
        out,
        format!(
            "m {}  median E0 {} MeV  delta E0 {} MeV  max delta E0 {} MeV",
            last.m,
            output::sig9(last.e0_median),
            output::sig9(last.delta_e0),
            output::sig9(worst)
        ),
    )
}

fn compare(common: &Common, data: Option<&Path>, pipeline: Pipeline, out: &mut dyn Write) -> Result<(), CliError> {
    let config = common.resolve()?;
    let exp = match data {
        Some(p) => data::load_spectrum(p)?,
        None => data::bundled_spectrum(config.a, config.z).ok_or_else(|| {
            CliError::Validation(format!(
                "no bundled data for A={} Z={}; pass --data",
                config.a, config.z
            ))
        })?,
    };
    let spectrum = match pipeline {
        Pipeline::Classical => run_classical(&config)?,
        Pipeline::Quantum => {
            let runs = quantum_runs(&config, common.seed)?;
            median_run(&runs).spectrum.clone()
        }
    };
    let c = compare_with_experiment(&spectrum, &exp)?;
    let dir = prepare_out(common, &config)?;
    output::write_spectrum(&dir.join("spectrum.csv"), &spectrum)?;
    output::write_comparison(&dir.join("comparison.csv"), &c)?;
    say(out, format!("data: {}", exp.source))?;
    say(
        out,
        format!(
            "peak offset {} MeV  height ratio {}",
            output::sig9(c.peak_offset),
            output::sig9(c.height_ratio)
        ),
    )
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Classical(c) => classical(c, out),
        Command::Quantum(c) => quantum(c, out),
        Command::BasisStudy { common, bases } => basis(common, bases, out),
        Command::ErrorStudy(c) => error_study(c, out),
        Command::Compare {
            common,
            data,
            pipeline,
        } => compare(common, data.as_deref(), *pipeline, out),
        Command::Selftest => selftest::run_checks(&selftest::Goldens::default(), out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn quantum_with_seed() {
        let cli = Cli::try_parse_from(["gdrq", "quantum", "--config", "sn120.cfg", "--seed", "7"]).unwrap();
        match cli.command {
            Command::Quantum(c) => {
                assert_eq!(c.seed, 7);
                assert_eq!(c.config, PathBuf::from("sn120.cfg"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_shots_is_a_validation_error() {
        let cli = Cli::try_parse_from(["gdrq", "classical", "--config", "x.toml", "--shots=-1"]).unwrap();
        let Command::Classical(c) = cli.command else { panic!() };
        assert!(matches!(c.resolve(), Err(CliError::Validation(_))));
    }

    #[test]
    fn unknown_subcommand_and_flag() {
        assert!(Cli::try_parse_from(["gdrq", "plot"]).is_err());
        assert!(Cli::try_parse_from(["gdrq", "classical", "--config", "x", "--colour"]).is_err());
        assert!(Cli::try_parse_from(["gdrq"]).is_err());
    }

    #[test]
    fn default_bases_are_the_table() {
        let cli = Cli::try_parse_from(["gdrq", "basis-study", "--config", "x"]).unwrap();
        let Command::BasisStudy { bases, .. } = cli.command else { panic!() };
        assert_eq!(bases, TABLE_BASES);
    }

    #[test]
    fn override_values_are_typed() {
        assert_eq!(override_value("3"), toml::Value::Integer(3));
        assert_eq!(override_value("0.5"), toml::Value::Float(0.5));
        assert_eq!(override_value("true"), toml::Value::Boolean(true));
        assert_eq!(override_value("3-6"), toml::Value::String("3-6".into()));
        assert_eq!(override_value("\"lcu\""), toml::Value::String("lcu".into()));
    }
}
