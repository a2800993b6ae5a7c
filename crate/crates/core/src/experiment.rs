//! End-to-end pipelines: classical and quantum spectra, the basis-window
//! study, run-to-run peak statistics and comparison with measured data.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algorithms::{energy_expectation, transition_strength, Mode, StatePrep};
use crate::encoding::{
    build_hamiltonian, fill_occupations, reduced_dipole, shell_dipole_factor, BasisWindow,
    NucleusConfig, PrepMethod, Species,
};
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::response::{
    classical_transitions, kappa_alpha, peak_and_width, quantum_transitions, shape_frequencies,
    MeasuredTransition, ResponseSpectrum, TransitionSet,
};
use crate::rng::RngStream;
use crate::statevector::StateVector;

/// Largest window the quantum pipeline accepts.
pub const MAX_QUANTUM_MODES: usize = 5;

/// Independent-particle spectrum: occupations, shell transitions, dressing
/// and cross section.
pub fn run_classical(config: &NucleusConfig) -> Result<ResponseSpectrum> {
    config.validate()?;
    let occ = fill_occupations(config)?;
    let shape = shape_frequencies(config.a, config.beta2)?;
    let ts = classical_transitions(config, &occ, &shape);
    ResponseSpectrum::compute(
        &ts,
        &config.grid.points(),
        config.gamma_spread,
        kappa_alpha(config.kappa, config, &shape),
        config.calibration,
    )
}

/// Occupied-core bit string of the window register, with its statistical
/// weight for one species.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub species: Species,
    pub index: usize,
    pub weight: f64,
}

/// A single-particle hop from a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct Excitation {
    pub reference: usize,
    pub target: usize,
    /// Lower shell of the hop.
    pub shell: u32,
    /// `e_s² b² M(N) · weight`, turning a reduced-dipole strength into fm².
    pub factor: f64,
}

/// Everything about a quantum run that does not depend on the random stream.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumPlan {
    pub nqubits: usize,
    pub hamiltonian: PauliSum,
    /// Dipole in units of `η b`.
    pub dipole: PauliSum,
    pub references: Vec<Reference>,
    pub excitations: Vec<Excitation>,
}

impl QuantumPlan {
    /// Basis indices whose energies a run measures, ascending.
    pub fn energy_states(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .references
            .iter()
            .map(|r| r.index)
            .chain(self.excitations.iter().map(|e| e.target))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Distinct (reference, target) index pairs, ascending.
    pub fn strength_pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self
            .excitations
            .iter()
            .map(|e| (self.references[e.reference].index, e.target))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Core bit strings for each species.
///
/// A Fermi shell `F` filled to fraction `f` gives two references: shells
/// below `F` occupied (weight `1 − f`) and shells up to `F` occupied
/// (weight `f`). Excitations are the basis states the dipole reaches from a
/// reference.
pub fn quantum_plan(config: &NucleusConfig) -> Result<QuantumPlan> {
    config.validate()?;
    if config.beta2 != 0.0 {
        return Err(Error::Validation(
            "the quantum pipeline handles spherical nuclei only (beta2 = 0)".into(),
        ));
    }
    let w = config.basis;
    let n = w.nqubits();
    if n > MAX_QUANTUM_MODES {
        return Err(Error::Capacity(alloc::format!(
            "window {w} has {n} modes, the quantum pipeline takes at most {MAX_QUANTUM_MODES}"
        )));
    }
    let occ = fill_occupations(config)?;
    let hamiltonian = build_hamiltonian(w, config.hbar_omega())?;
    let dipole = reduced_dipole(w)?;
    let b2 = config.oscillator_length().powi(2);

    let mut references = Vec::new();
    let mut excitations = Vec::new();
    for species in Species::BOTH {
        let fermi = occ.fermi_level(species);
        let f = occ.occupation(species, fermi);
        let e2 = config.effective_charge(species).powi(2);
        for (top, weight) in [(fermi.checked_sub(1), 1.0 - f), (Some(fermi), f)] {
            let Some(top) = top else { continue };
            if weight <= 0.0 {
                continue;
            }
            let index = w
                .shells()
                .filter(|&s| s <= top)
                .fold(0usize, |acc, s| acc | 1 << (s - w.n_min()));
            if index == 0 {
                continue;
            }
            let r = references.len();
            references.push(Reference {
                species,
                index,
                weight,
            });
            let image = dipole.apply(&StateVector::basis(n, index)?)?;
            for (target, amp) in image.amplitudes().iter().enumerate() {
                if amp.norm() < 1e-12 {
                    continue;
                }
                let shell = w.n_min() + (target ^ index).trailing_zeros();
                excitations.push(Excitation {
                    reference: r,
                    target,
                    shell,
                    factor: e2 * b2 * shell_dipole_factor(shell) * weight,
                });
            }
        }
    }
    Ok(QuantumPlan {
        nqubits: n,
        hamiltonian,
        dipole,
        references,
        excitations,
    })
}

fn mode_of(config: &NucleusConfig) -> Mode {
    if config.exact {
        Mode::Exact
    } else {
        Mode::Sampled {
            shots: config.shots,
            attempt_cap: config.attempt_cap,
        }
    }
}

fn prep_of(config: &NucleusConfig) -> StatePrep {
    match config.prep {
        PrepMethod::TimeEvolution => StatePrep::TimeEvolution {
            gamma: config.gamma_prep,
        },
        PrepMethod::Lcu => StatePrep::Lcu,
    }
}

/// Measure every energy and strength of `plan` once and assemble the
/// excitations. Energies are measured per distinct basis state, strengths per
/// distinct (reference, target) pair, both in ascending index order.
pub fn measure_transitions(
    config: &NucleusConfig,
    plan: &QuantumPlan,
    rng: &mut RngStream,
) -> Result<Vec<MeasuredTransition>> {
    let mode = mode_of(config);
    let prep = prep_of(config);
    let n = plan.nqubits;
    let mut energies = BTreeMap::new();
    for idx in plan.energy_states() {
        let s = StateVector::basis(n, idx)?;
        energies.insert(idx, energy_expectation(&plan.hamiltonian, &s, mode, rng)?);
    }
    let mut strengths = BTreeMap::new();
    for (r, t) in plan.strength_pairs() {
        let psi0 = StateVector::basis(n, r)?;
        let nu = StateVector::basis(n, t)?;
        strengths.insert((r, t), transition_strength(&psi0, &plan.dipole, &nu, prep, mode, rng)?);
    }
    Ok(plan
        .excitations
        .iter()
        .map(|e| {
            let r = plan.references[e.reference].index;
            MeasuredTransition {
                energy: energies[&e.target] - energies[&r],
                strength: e.factor * strengths[&(r, e.target)],
            }
        })
        .collect())
}

/// One quantum pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_index: u64,
    pub seed: u64,
    pub transitions: TransitionSet,
    pub spectrum: ResponseSpectrum,
    pub e0: f64,
}

/// Quantum spectrum for run `run_index` under `seed`; the run draws from
/// ChaCha stream `run_index`.
pub fn run_quantum(config: &NucleusConfig, seed: u64, run_index: u64) -> Result<RunRecord> {
    let plan = quantum_plan(config)?;
    run_quantum_with_plan(config, &plan, seed, run_index)
}

pub fn run_quantum_with_plan(
    config: &NucleusConfig,
    plan: &QuantumPlan,
    seed: u64,
    run_index: u64,
) -> Result<RunRecord> {
    let mut rng = RngStream::for_run(seed, run_index);
    let measured = measure_transitions(config, plan, &mut rng)?;
    let transitions = quantum_transitions(&measured);
    let shape = shape_frequencies(config.a, config.beta2)?;
    let spectrum = ResponseSpectrum::compute(
        &transitions,
        &config.grid.points(),
        config.gamma_spread,
        kappa_alpha(config.kappa, config, &shape),
        config.calibration,
    )?;
    Ok(RunRecord {
        run_index,
        seed,
        transitions,
        e0: spectrum.peak_e0,
        spectrum,
    })
}

/// Median; even-length input takes the mean of the central pair.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Validation("median of an empty list".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Ok(if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    })
}

/// Median absolute deviation from the median.
pub fn mad(values: &[f64]) -> Result<f64> {
    let m = median(values)?;
    let dev: Vec<f64> = values.iter().map(|x| (x - m).abs()).collect();
    median(&dev)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MadPoint {
    /// Number of runs included.
    pub m: usize,
    pub e0_median: f64,
    pub delta_e0: f64,
}

/// Median and MAD of the first `m` peak energies for `m = 2..=len`.
#[derive(Debug, Clone, PartialEq)]
pub struct MadSeries {
    pub points: Vec<MadPoint>,
}

impl MadSeries {
    pub fn from_e0(e0: &[f64]) -> Result<Self> {
        if e0.len() < 2 {
            return Err(Error::Validation("a MAD series needs at least two runs".into()));
        }
        let points = (2..=e0.len())
            .map(|m| {
                Ok(MadPoint {
                    m,
                    e0_median: median(&e0[..m])?,
                    delta_e0: mad(&e0[..m])?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MadSeries { points })
    }

    pub fn at(&self, m: usize) -> Option<&MadPoint> {
        self.points.iter().find(|p| p.m == m)
    }

    pub fn last(&self) -> &MadPoint {
        self.points.last().expect("series holds at least one point")
    }
}

/// Runs `0..max_runs` one after another, then the MAD series.
pub fn error_vs_runs(
    config: &NucleusConfig,
    max_runs: u32,
    master_seed: u64,
) -> Result<(Vec<RunRecord>, MadSeries)> {
    if max_runs < 2 {
        return Err(Error::Validation("error study needs at least two runs".into()));
    }
    let plan = quantum_plan(config)?;
    let runs = (0..max_runs as u64)
        .map(|i| run_quantum_with_plan(config, &plan, master_seed, i))
        .collect::<Result<Vec<_>>>()?;
    let e0: Vec<f64> = runs.iter().map(|r| r.e0).collect();
    Ok((runs, MadSeries::from_e0(&e0)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisRow {
    pub label: String,
    pub window: BasisWindow,
    pub e0: f64,
    pub width: f64,
}

/// Classical peak and width for each window.
pub fn basis_study(config: &NucleusConfig, windows: &[BasisWindow]) -> Result<Vec<BasisRow>> {
    windows
        .iter()
        .map(|&w| {
            let mut c = config.clone();
            c.basis = w;
            let s = run_classical(&c)?;
            Ok(BasisRow {
                label: w.label().map(String::from).unwrap_or_else(|| alloc::format!("{w}")),
                window: w,
                e0: s.peak_e0,
                width: s.width_fwhm,
            })
        })
        .collect()
}

/// Measured cross section on its own grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentalSpectrum {
    energies: Vec<f64>,
    sigma: Vec<f64>,
    pub source: String,
}

impl ExperimentalSpectrum {
    pub fn new(energies: Vec<f64>, sigma: Vec<f64>, source: String) -> Result<Self> {
        if energies.len() != sigma.len() {
            return Err(Error::Size {
                expected: energies.len(),
                found: sigma.len(),
            });
        }
        if energies.len() < 3 {
            return Err(Error::Validation("experimental spectrum needs at least three points".into()));
        }
        if energies.windows(2).any(|p| !(p[1] > p[0])) {
            return Err(Error::Validation("experimental energies must increase strictly".into()));
        }
        Ok(ExperimentalSpectrum {
            energies,
            sigma,
            source,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    if x < xs[0] || x > xs[xs.len() - 1] {
        return None;
    }
    let k = xs.partition_point(|&v| v <= x);
    if k == xs.len() {
        return Some(ys[xs.len() - 1]);
    }
    let (x0, x1) = (xs[k - 1], xs[k]);
    Some(ys[k - 1] + (ys[k] - ys[k - 1]) * (x - x0) / (x1 - x0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub energy: f64,
    pub sigma_model: f64,
    pub sigma_exp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Model peak minus experimental peak, MeV.
    pub peak_offset: f64,
    /// Model peak height over experimental peak height.
    pub height_ratio: f64,
    /// Model interpolated onto the experimental points inside its range.
    pub rows: Vec<ComparisonRow>,
}

/// Summary comparison of a model spectrum with measured data.
pub fn compare_with_experiment(spectrum: &ResponseSpectrum, exp: &ExperimentalSpectrum) -> Result<Comparison> {
    let rows: Vec<ComparisonRow> = exp
        .energies
        .iter()
        .zip(&exp.sigma)
        .filter_map(|(&e, &s)| {
            interpolate(&spectrum.energies, &spectrum.sigma, e).map(|m| ComparisonRow {
                energy: e,
                sigma_model: m,
                sigma_exp: s,
            })
        })
        .collect();
    if rows.is_empty() {
        return Err(Error::Validation(alloc::format!(
            "experimental range {}..{} MeV does not overlap the model grid",
            exp.energies[0],
            exp.energies[exp.energies.len() - 1]
        )));
    }
    let (exp_e0, _) = peak_and_width(&exp.energies, &exp.sigma)?;
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Comparison {
        peak_offset: spectrum.peak_e0 - exp_e0,
        height_ratio: max(&spectrum.sigma) / max(&exp.sigma),
        rows,
    })
}
