//! Harmonic-oscillator shell model on qubits.
//!
//! One qubit per principal shell `N` of a [`BasisWindow`]; qubit `N - n_min`
//! carries shell `N`. Fermion operators are mapped with the Jordan–Wigner
//! transformation, so the shell Hamiltonian is a sum of `I` and `Z` strings
//! and the dipole operator hops between neighbouring shells.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum, PauliTerm};

/// ħc in MeV·fm.
pub const HBAR_C: f64 = 197.327;
/// Average nucleon rest energy Mc² in MeV.
pub const NUCLEON_MASS: f64 = 938.919;

/// Oscillator quantum ħω = 41 A^(-1/3) MeV.
pub fn hbar_omega(a: u32) -> f64 {
    41.0 * (a as f64).powf(-1.0 / 3.0)
}

/// Oscillator length b = ħc / √(Mc² ħω) in fm.
pub fn oscillator_length(hbar_omega: f64) -> f64 {
    HBAR_C / (NUCLEON_MASS * hbar_omega).sqrt()
}

/// Inclusive range of principal shells kept in the calculation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisWindow {
    n_min: u32,
    n_max: u32,
}

impl BasisWindow {
    /// Truncations studied for ¹²⁰Sn, labelled `Basis 1` to `Basis 5`.
    pub const TABLE: [(&'static str, BasisWindow); 5] = [
        ("Basis 1", BasisWindow { n_min: 0, n_max: 10 }),
        ("Basis 2", BasisWindow { n_min: 2, n_max: 8 }),
        ("Basis 3", BasisWindow { n_min: 3, n_max: 6 }),
        ("Basis 4", BasisWindow { n_min: 4, n_max: 6 }),
        ("Basis 5", BasisWindow { n_min: 4, n_max: 5 }),
    ];

    pub fn new(n_min: u32, n_max: u32) -> Result<Self> {
        if n_max < n_min {
            return Err(Error::Validation(alloc::format!(
                "basis window {n_min}-{n_max} is empty"
            )));
        }
        Ok(BasisWindow { n_min, n_max })
    }

    pub fn n_min(&self) -> u32 {
        self.n_min
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn nqubits(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn contains(&self, n: u32) -> bool {
        (self.n_min..=self.n_max).contains(&n)
    }

    /// Qubit carrying shell `n`.
    pub fn qubit(&self, n: u32) -> Option<usize> {
        self.contains(n).then(|| (n - self.n_min) as usize)
    }

    pub fn shells(&self) -> core::ops::RangeInclusive<u32> {
        self.n_min..=self.n_max
    }

    /// Table label (`Basis 3`) when the window is one of [`Self::TABLE`].
    pub fn label(&self) -> Option<&'static str> {
        Self::TABLE
            .iter()
            .find(|(_, w)| w == self)
            .map(|(l, _)| *l)
    }
}

impl fmt::Display for BasisWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.n_min, self.n_max)
    }
}

impl FromStr for BasisWindow {
    type Err = Error;

    /// Parses `"3-6"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(alloc::format!("basis window '{s}' is not of the form MIN-MAX"));
        let (lo, hi) = s.trim().split_once('-').ok_or_else(bad)?;
        let lo = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim().parse().map_err(|_| bad())?;
        BasisWindow::new(lo, hi)
    }
}

/// How excited states are prepared in the quantum pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrepMethod {
    /// Controlled `exp(-iγO)` with ancilla post-selection.
    TimeEvolution,
    /// Block encoding of `O` as a linear combination of unitaries.
    Lcu,
}

/// Energy grid `e_min, e_min + step, ..., e_max` in MeV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyGrid {
    pub e_min: f64,
    pub e_max: f64,
    pub step: f64,
}

impl EnergyGrid {
    pub fn new(e_min: f64, e_max: f64, step: f64) -> Result<Self> {
        let g = EnergyGrid { e_min, e_max, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_min.is_finite() && self.e_max.is_finite() && self.e_min < self.e_max) {
            return Err(Error::Validation(alloc::format!(
                "energy range {}..{} is empty",
                self.e_min,
                self.e_max
            )));
        }
        if !(self.step > 0.0) || self.step > self.e_max - self.e_min {
            return Err(Error::Validation(alloc::format!(
                "energy step {} does not fit the range",
                self.step
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.e_max - self.e_min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.e_min + i as f64 * self.step).collect()
    }
}

impl Default for EnergyGrid {
    fn default() -> Self {
        EnergyGrid {
            e_min: 5.0,
            e_max: 30.0,
            step: 0.1,
        }
    }
}

/// Everything a pipeline run needs to know about the nucleus and protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct NucleusConfig {
    pub a: u32,
    pub z: u32,
    /// Residual dipole strength κ.
    pub kappa: f64,
    /// Lorentzian half width Γ in MeV.
    pub gamma_spread: f64,
    /// Quadrupole deformation a₂₀.
    pub beta2: f64,
    pub basis: BasisWindow,
    pub shots: u64,
    pub runs: u32,
    /// State preparation angle γ.
    pub gamma_prep: f64,
    pub grid: EnergyGrid,
    /// Multiplicative cross-section normalisation.
    pub calibration: f64,
    pub prep: PrepMethod,
    /// Post-selection restarts allowed per preparation.
    pub attempt_cap: u32,
    /// Use analytic probabilities instead of shot sampling.
    pub exact: bool,
}

impl NucleusConfig {
    /// Defaults: κ = 0.4, Γ = 2 MeV, spherical, window 3–6, 8000 shots,
    /// 100 runs, γ = 0.1, grid 5–30 MeV in 0.1 MeV steps.
    pub fn new(a: u32, z: u32) -> Self {
        NucleusConfig {
            a,
            z,
            kappa: 0.4,
            gamma_spread: 2.0,
            beta2: 0.0,
            basis: BasisWindow { n_min: 3, n_max: 6 },
            shots: 8000,
            runs: 100,
            gamma_prep: 0.1,
            grid: EnergyGrid::default(),
            calibration: 1.0,
            prep: PrepMethod::TimeEvolution,
            attempt_cap: 1000,
            exact: false,
        }
    }

    pub fn neutrons(&self) -> u32 {
        self.a - self.z
    }

    /// Effective dipole charge factor η = NZ/A.
    pub fn eta(&self) -> f64 {
        self.neutrons() as f64 * self.z as f64 / self.a as f64
    }

    pub fn hbar_omega(&self) -> f64 {
        hbar_omega(self.a)
    }

    pub fn oscillator_length(&self) -> f64 {
        oscillator_length(self.hbar_omega())
    }

    pub fn particles(&self, species: Species) -> u32 {
        match species {
            Species::Proton => self.z,
            Species::Neutron => self.neutrons(),
        }
    }

    /// Centre-of-mass dipole charge: N/A for protons, Z/A for neutrons
    /// (the neutron sign drops out of squared matrix elements).
    pub fn effective_charge(&self, species: Species) -> f64 {
        match species {
            Species::Proton => self.neutrons() as f64 / self.a as f64,
            Species::Neutron => self.z as f64 / self.a as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: alloc::string::String| Err(Error::Validation(m));
        if self.z < 1 {
            return fail("Z must be at least 1".into());
        }
        if self.a <= self.z {
            return fail(alloc::format!("A = {} must exceed Z = {}", self.a, self.z));
        }
        if !(self.gamma_spread > 0.0 && self.gamma_spread.is_finite()) {
            return fail(alloc::format!("gamma_spread = {} must be positive", self.gamma_spread));
        }
        if !self.kappa.is_finite() {
            return fail("kappa must be finite".into());
        }
        if !(self.beta2.is_finite() && self.beta2.abs() <= 0.5) {
            return fail(alloc::format!("beta2 = {} outside [-0.5, 0.5]", self.beta2));
        }
        if self.shots < 1 {
            return fail("shots must be at least 1".into());
        }
        if self.runs < 1 {
            return fail("runs must be at least 1".into());
        }
        if !(self.gamma_prep > 0.0 && self.gamma_prep.is_finite()) {
            return fail(alloc::format!("gamma_prep = {} must be positive", self.gamma_prep));
        }
        if !(self.calibration > 0.0 && self.calibration.is_finite()) {
            return fail(alloc::format!("calibration = {} must be positive", self.calibration));
        }
        if self.attempt_cap < 1 {
            return fail("attempt_cap must be at least 1".into());
        }
        self.grid.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Species {
    Proton,
    Neutron,
}

impl Species {
    pub const BOTH: [Species; 2] = [Species::Proton, Species::Neutron];
}

/// States in shell `N` per species, spin included.
pub fn shell_capacity(n: u32) -> u32 {
    (n + 1) * (n + 2)
}

/// Sum over the substates of shell `N` of the squared 1-D ladder factor,
/// relative to `(N+1)/2`: the full x-dipole strength from a filled shell `N`
/// to shell `N+1` is `b² (N+1)/2 · M(N)`.
pub fn shell_dipole_factor(n: u32) -> f64 {
    ((n + 2) * (n + 3)) as f64 / 3.0
}

/// Jordan–Wigner `a†_j = ½(X_j − iY_j) Π_{k<j} Z_k`.
pub fn jw_creation(j: usize, nqubits: usize) -> Result<PauliSum> {
    jw_ladder(j, nqubits, -1.0)
}

/// Jordan–Wigner `a_j = ½(X_j + iY_j) Π_{k<j} Z_k`.
pub fn jw_annihilation(j: usize, nqubits: usize) -> Result<PauliSum> {
    jw_ladder(j, nqubits, 1.0)
}

fn jw_ladder(j: usize, nqubits: usize, y_sign: f64) -> Result<PauliSum> {
    if j >= nqubits {
        return Err(Error::Index(alloc::format!(
            "mode {j} outside a {nqubits}-mode register"
        )));
    }
    let mut axes = vec![Pauli::I; nqubits];
    for a in axes.iter_mut().take(j) {
        *a = Pauli::Z;
    }
    let mut x = axes.clone();
    x[j] = Pauli::X;
    let mut y = axes;
    y[j] = Pauli::Y;
    PauliSum::from_terms(
        nqubits,
        vec![
            PauliTerm::new(Complex64::new(0.5, 0.0), x),
            PauliTerm::new(Complex64::new(0.0, 0.5 * y_sign), y),
        ],
    )
}

/// `a†_p a_q` as a Pauli sum.
pub fn hopping(p: usize, q: usize, nqubits: usize) -> Result<PauliSum> {
    jw_creation(p, nqubits)?.multiply(&jw_annihilation(q, nqubits)?)
}

/// `H = Σ_N ħω (N + 3/2) a†_N a_N` over the window.
pub fn build_hamiltonian(basis: BasisWindow, hbar_omega: f64) -> Result<PauliSum> {
    let n = basis.nqubits();
    let mut h = PauliSum::zero(n);
    for shell in basis.shells() {
        let q = (shell - basis.n_min) as usize;
        let e = hbar_omega * (shell as f64 + 1.5);
        h = h.add(&hopping(q, q, n)?.scale_real(e))?;
    }
    Ok(h)
}

/// Dipole with unit charge and unit length: `Σ_N √((N+1)/2) (a†_{N+1} a_N + h.c.)`.
pub fn reduced_dipole(basis: BasisWindow) -> Result<PauliSum> {
    let n = basis.nqubits();
    let mut d = PauliSum::zero(n);
    for shell in basis.n_min..basis.n_max {
        let q = (shell - basis.n_min) as usize;
        let m = ((shell as f64 + 1.0) / 2.0).sqrt();
        let pair = hopping(q + 1, q, n)?.add(&hopping(q, q + 1, n)?)?;
        d = d.add(&pair.scale_real(m))?;
    }
    Ok(d)
}

/// Dipole with matrix elements `d_{N,N+1} = η √((N+1)/2) b` in fm.
pub fn build_dipole(basis: BasisWindow, config: &NucleusConfig) -> Result<PauliSum> {
    Ok(reduced_dipole(basis)?.scale_real(config.eta() * config.oscillator_length()))
}

/// Shell occupation fractions for both species.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationTable {
    protons: Vec<f64>,
    neutrons: Vec<f64>,
    pub fermi_level_p: u32,
    pub fermi_level_n: u32,
}

impl OccupationTable {
    fn shells(&self, species: Species) -> &[f64] {
        match species {
            Species::Proton => &self.protons,
            Species::Neutron => &self.neutrons,
        }
    }

    /// Fraction of shell `n` filled, zero above the filled region.
    pub fn occupation(&self, species: Species, n: u32) -> f64 {
        self.shells(species).get(n as usize).copied().unwrap_or(0.0)
    }

    pub fn fermi_level(&self, species: Species) -> u32 {
        match species {
            Species::Proton => self.fermi_level_p,
            Species::Neutron => self.fermi_level_n,
        }
    }

    /// Particle number implied by the table.
    pub fn particles(&self, species: Species) -> f64 {
        self.shells(species)
            .iter()
            .enumerate()
            .map(|(n, f)| f * shell_capacity(n as u32) as f64)
            .sum()
    }
}

fn fill(particles: u32, n_max: u32, what: &str) -> Result<(Vec<f64>, u32)> {
    let mut left = particles;
    let mut shells = Vec::new();
    let mut fermi = 0;
    for n in 0..=n_max {
        if left == 0 {
            break;
        }
        let cap = shell_capacity(n);
        let put = left.min(cap);
        shells.push(put as f64 / cap as f64);
        left -= put;
        fermi = n;
    }
    if left > 0 {
        return Err(Error::Capacity(alloc::format!(
            "{particles} {what} do not fit in shells 0-{n_max}"
        )));
    }
    Ok((shells, fermi))
}

/// Fill shells from `N = 0` upward, `(N+1)(N+2)` states per shell and species.
pub fn fill_occupations(config: &NucleusConfig) -> Result<OccupationTable> {
    if config.z < 1 || config.a <= config.z {
        return Err(Error::Validation(alloc::format!(
            "inconsistent nucleus A = {}, Z = {}",
            config.a,
            config.z
        )));
    }
    let n_max = config.basis.n_max;
    let (protons, fermi_level_p) = fill(config.z, n_max, "protons")?;
    let (neutrons, fermi_level_n) = fill(config.neutrons(), n_max, "neutrons")?;
    Ok(OccupationTable {
        protons,
        neutrons,
        fermi_level_p,
        fermi_level_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;

    fn dense(p: &PauliSum) -> CMatrix {
        p.dense_matrix().unwrap()
    }

    #[test]
    fn oscillator_quantum() {
        assert_eq!(hbar_omega(1), 41.0);
        assert!((hbar_omega(120) - 8.312342727).abs() < 1e-8);
        assert!((hbar_omega(208) - 6.919840407).abs() < 1e-8);
    }

    #[test]
    fn oscillator_lengths() {
        assert!((oscillator_length(hbar_omega(120)) - 2.2336274).abs() < 1e-6);
        assert!((oscillator_length(hbar_omega(208)) - 2.4480733).abs() < 1e-6);
    }

    #[test]
    fn single_mode_ladder_operators() {
        let up = dense(&jw_creation(0, 1).unwrap());
        let down = dense(&jw_annihilation(0, 1).unwrap());
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(up[(1, 0)], one);
        assert_eq!(up[(0, 1)], Complex64::new(0.0, 0.0));
        assert_eq!(down[(0, 1)], one);
        assert!(jw_creation(2, 2).is_err());
    }

    #[test]
    fn parity_string_below_mode() {
        let a = jw_creation(1, 2).unwrap();
        assert_eq!(a.terms().len(), 2);
        assert_eq!(a.coefficient(&[Pauli::Z, Pauli::X]), Complex64::new(0.5, 0.0));
        assert_eq!(a.coefficient(&[Pauli::Z, Pauli::Y]), Complex64::new(0.0, -0.5));
    }

    #[test]
    fn hamiltonian_windows() {
        let h4 = build_hamiltonian(BasisWindow::new(0, 3).unwrap(), 1.0).unwrap();
        assert_eq!(h4.compact(1.0), "6I-0.75Z0-1.25Z1-1.75Z2-2.25Z3");
        let h5 = build_hamiltonian(BasisWindow::new(0, 4).unwrap(), 1.0).unwrap();
        assert_eq!(h5.compact(1.0), "8.75I-0.75Z0-1.25Z1-1.75Z2-2.25Z3-2.75Z4");
        let h = build_hamiltonian(BasisWindow::new(3, 6).unwrap(), 1.0).unwrap();
        assert_eq!(h.compact(1.0), "12I-2.25Z0-2.75Z1-3.25Z2-3.75Z3");
    }

    #[test]
    fn dipole_two_modes() {
        let cfg = NucleusConfig::new(120, 50);
        let w = BasisWindow::new(0, 1).unwrap();
        let d = build_dipole(w, &cfg).unwrap();
        let d01 = cfg.eta() * cfg.oscillator_length() * 0.5f64.sqrt();
        assert_eq!(d.terms().len(), 2);
        assert!((d.coefficient(&[Pauli::X, Pauli::X]).re - 0.5 * d01).abs() < 1e-12);
        assert!((d.coefficient(&[Pauli::Y, Pauli::Y]).re - 0.5 * d01).abs() < 1e-12);
        let single = build_dipole(BasisWindow::new(2, 2).unwrap(), &cfg).unwrap();
        assert!(single.is_empty());
        let big = dense(&build_dipole(BasisWindow::new(3, 6).unwrap(), &cfg).unwrap());
        assert!(big.is_hermitian(1e-12));
    }

    #[test]
    fn fermi_levels() {
        let mut sn = NucleusConfig::new(120, 50);
        sn.basis = BasisWindow::new(0, 10).unwrap();
        let occ = fill_occupations(&sn).unwrap();
        assert_eq!(occ.fermi_level_p, 4);
        assert_eq!(occ.fermi_level_n, 4);
        assert!((occ.occupation(Species::Proton, 4) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(occ.occupation(Species::Neutron, 4), 1.0);
        assert_eq!(occ.occupation(Species::Neutron, 5), 0.0);

        let pb = NucleusConfig::new(208, 82);
        let occ = fill_occupations(&pb).unwrap();
        assert_eq!(occ.fermi_level_p, 5);
        assert_eq!(occ.fermi_level_n, 6);
        assert!((occ.particles(Species::Neutron) - 126.0).abs() < 1e-12);
        assert!((occ.particles(Species::Proton) - 82.0).abs() < 1e-12);
    }

    #[test]
    fn smallest_closed_shell() {
        let cfg = NucleusConfig::new(4, 2);
        let occ = fill_occupations(&cfg).unwrap();
        assert_eq!(occ.fermi_level_p, 0);
        assert_eq!(occ.occupation(Species::Proton, 0), 1.0);
        assert_eq!(occ.occupation(Species::Proton, 1), 0.0);
    }

    #[test]
    fn window_capacity_exceeded() {
        let mut pb = NucleusConfig::new(208, 82);
        pb.basis = BasisWindow::new(4, 5).unwrap();
        assert!(matches!(fill_occupations(&pb), Err(Error::Capacity(_))));
    }

    #[test]
    fn window_parsing() {
        let w: BasisWindow = "3-6".parse().unwrap();
        assert_eq!(w, BasisWindow::new(3, 6).unwrap());
        assert_eq!(w.nqubits(), 4);
        assert_eq!(w.label(), Some("Basis 3"));
        assert_eq!(w.qubit(5), Some(2));
        assert!("6-3".parse::<BasisWindow>().is_err());
        assert!("x".parse::<BasisWindow>().is_err());
    }

    #[test]
    fn grid_points() {
        let g = EnergyGrid::default().points();
        assert_eq!(g.len(), 251);
        assert!((g[250] - 30.0).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        let mut c = NucleusConfig::new(120, 50);
        assert!(c.validate().is_ok());
        c.gamma_spread = 0.0;
        assert!(c.validate().is_err());
        let c = NucleusConfig::new(50, 50);
        assert!(c.validate().is_err());
    }
}
