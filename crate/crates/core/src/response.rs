//! Dipole response functions and photoabsorption cross sections.
//!
//! A [`TransitionSet`] holds poles of the bare response for each Cartesian
//! direction. The bare response is dressed by the separable dipole–dipole
//! interaction and converted to σ(E). Only diagonal `αα` components are
//! formed; off-diagonal ones vanish for the shapes handled here.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::encoding::{
    oscillator_length, shell_dipole_factor, NucleusConfig, OccupationTable, Species, HBAR_C,
    NUCLEON_MASS,
};
use crate::error::{Error, Result};

/// e² in MeV·fm.
pub const E_SQUARED: f64 = 1.44;
/// fm² to mb.
pub const FM2_TO_MB: f64 = 10.0;
/// Nuclear radius parameter r₀ in R₀ = r₀ A^(1/3), fm.
pub const RADIUS_PARAMETER: f64 = 1.2;
/// Smallest allowed |1 − κR⁰| before the dressed response counts as singular.
pub const POLE_TOLERANCE: f64 = 1e-10;

/// One pole of the bare response along direction `axis` (0, 1, 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// Excitation energy in MeV.
    pub energy: f64,
    /// Squared dipole matrix element in fm².
    pub strength: f64,
    /// Occupation factor; 1 for many-body transitions.
    pub weight: f64,
    pub axis: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransitionSet {
    pub transitions: Vec<Transition>,
}

impl TransitionSet {
    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn axis(&self, axis: usize) -> impl Iterator<Item = &Transition> {
        self.transitions.iter().filter(move |t| t.axis == axis)
    }

    /// Σ strength · weight along `axis`.
    pub fn total_strength(&self, axis: usize) -> f64 {
        self.axis(axis).map(|t| t.strength * t.weight).sum()
    }
}

/// Nuclear surface `R(θ) = C R₀ [1 + β₂ Y₂₀(θ)]` and the oscillator
/// frequencies along its principal axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    pub beta2: f64,
    /// Volume conservation constant.
    pub c: f64,
    /// R₀ in fm.
    pub r0: f64,
    /// Semi-axes along x, y, z in fm.
    pub semi_axes: [f64; 3],
    /// ħω along x, y, z in MeV.
    pub hbar_omega: [f64; 3],
}

fn y20(cos_theta: f64) -> f64 {
    (5.0 / (16.0 * PI)).sqrt() * (3.0 * cos_theta * cos_theta - 1.0)
}

/// 4-point Gauss–Legendre rule; exact for the degree-6 volume integrand.
const GL_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

/// Semi-axes and axis frequencies for a quadrupole-deformed nucleus, with
/// `ħω_α ∝ 1/R_α` and geometric mean fixed to 41 A^(-1/3) MeV.
pub fn shape_frequencies(a: u32, beta2: f64) -> Result<ShapeParams> {
    if !(beta2.is_finite() && beta2.abs() <= 0.5) {
        return Err(Error::Validation(alloc::format!("beta2 = {beta2} outside [-0.5, 0.5]")));
    }
    // (1/2) ∫ (1 + β₂ Y₂₀)³ d(cos θ) = 1 / C³
    let mean_cube: f64 = GL_NODES
        .iter()
        .zip(GL_WEIGHTS)
        .map(|(&x, w)| w * (1.0 + beta2 * y20(x)).powi(3))
        .sum::<f64>()
        / 2.0;
    if !(mean_cube > 0.0 && mean_cube.is_finite()) {
        return Err(Error::Numeric(alloc::format!(
            "volume conservation has no solution for beta2 = {beta2}"
        )));
    }
    let c = mean_cube.powf(-1.0 / 3.0);
    let r0 = RADIUS_PARAMETER * (a as f64).cbrt();
    let r_perp = c * r0 * (1.0 + beta2 * y20(0.0));
    let r_par = c * r0 * (1.0 + beta2 * y20(1.0));
    if !(r_perp > 0.0 && r_par > 0.0) {
        return Err(Error::Numeric(alloc::format!(
            "surface radius turns negative for beta2 = {beta2}"
        )));
    }
    let semi_axes = [r_perp, r_perp, r_par];
    let geo = (r_perp * r_perp * r_par).cbrt();
    let base = crate::encoding::hbar_omega(a);
    let hbar_omega = semi_axes.map(|r| base * geo / r);
    Ok(ShapeParams {
        beta2,
        c,
        r0,
        semi_axes,
        hbar_omega,
    })
}

/// `κ_α = κ (3A/NZ) Mc² (ħω_α/ħc)²` in MeV/fm².
pub fn kappa_alpha(kappa: f64, config: &NucleusConfig, shape: &ShapeParams) -> [f64; 3] {
    let pref = kappa * 3.0 * config.a as f64 / (config.neutrons() as f64 * config.z as f64);
    shape
        .hbar_omega
        .map(|w| pref * NUCLEON_MASS * (w / HBAR_C) * (w / HBAR_C))
}

/// Independent-particle poles for every `N → N+1` pair inside the window.
///
/// The pair contributes at `ħω_α` with weight `n_N − n_{N+1}` and strength
/// `e_s² b_α² (N+1)/2 · M(N)`, the x-dipole strength of a full shell `N`.
pub fn classical_transitions(
    config: &NucleusConfig,
    occ: &OccupationTable,
    shape: &ShapeParams,
) -> TransitionSet {
    let w = config.basis;
    let mut transitions = Vec::new();
    for axis in 0..3 {
        let hw = shape.hbar_omega[axis];
        let b2 = oscillator_length(hw).powi(2);
        for species in Species::BOTH {
            let e = config.effective_charge(species);
            for n in w.n_min()..w.n_max() {
                let weight = occ.occupation(species, n) - occ.occupation(species, n + 1);
                if weight == 0.0 {
                    continue;
                }
                transitions.push(Transition {
                    energy: hw,
                    strength: e * e * b2 * (n as f64 + 1.0) / 2.0 * shell_dipole_factor(n),
                    weight,
                    axis,
                });
            }
        }
    }
    TransitionSet { transitions }
}

/// Measured many-body excitation: `e_ν − e₀` and `|⟨ν|D|0⟩|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredTransition {
    pub energy: f64,
    pub strength: f64,
}

/// Poles of the many-body response, one per excited state, weight 1,
/// repeated on all three (equivalent) axes.
pub fn quantum_transitions(measured: &[MeasuredTransition]) -> TransitionSet {
    let transitions = (0..3)
        .flat_map(|axis| {
            measured.iter().map(move |m| Transition {
                energy: m.energy,
                strength: m.strength,
                weight: 1.0,
                axis,
            })
        })
        .collect();
    TransitionSet { transitions }
}

/// `R⁰_αα(E) = Σ s w / (E − ΔE + iΓ)` on the grid.
pub fn bare_response(ts: &TransitionSet, grid: &[f64], gamma: f64) -> Result<[Vec<Complex64>; 3]> {
    if !(gamma > 0.0) {
        return Err(Error::Validation(alloc::format!("Gamma = {gamma} must be positive")));
    }
    Ok(core::array::from_fn(|axis| {
        grid.iter()
            .map(|&e| {
                ts.axis(axis).fold(Complex64::new(0.0, 0.0), |acc, t| {
                    acc + t.strength * t.weight / Complex64::new(e - t.energy, gamma)
                })
            })
            .collect()
    }))
}

/// `R = R⁰ / (1 − κ_α R⁰)` pointwise.
pub fn dress_response(r0: &[Vec<Complex64>; 3], kappas: [f64; 3], grid: &[f64]) -> Result<[Vec<Complex64>; 3]> {
    let mut out: [Vec<Complex64>; 3] = Default::default();
    for axis in 0..3 {
        let k = kappas[axis];
        let mut v = Vec::with_capacity(r0[axis].len());
        for (i, &r) in r0[axis].iter().enumerate() {
            let den = 1.0 - k * r;
            if den.norm() <= POLE_TOLERANCE {
                return Err(Error::PoleCrossing {
                    energy: grid.get(i).copied().unwrap_or(f64::NAN),
                });
            }
            v.push(r / den);
        }
        out[axis] = v;
    }
    Ok(out)
}

/// `σ(E) = (4π e²/ħc) E Σ_α (−Im R_αα)` in mb, before calibration.
pub fn cross_section(grid: &[f64], r: &[Vec<Complex64>; 3]) -> Vec<f64> {
    let pref = 4.0 * PI * E_SQUARED / HBAR_C * FM2_TO_MB;
    grid.iter()
        .enumerate()
        .map(|(i, &e)| pref * e * (0..3).map(|a| -r[a][i].im).sum::<f64>())
        .collect()
}

/// Peak position and FWHM of a sampled curve.
///
/// The peak is the first grid maximum refined by a parabola through it and
/// its neighbours; the half-height crossings are linearly interpolated.
pub fn peak_and_width(energies: &[f64], sigma: &[f64]) -> Result<(f64, f64)> {
    if energies.len() != sigma.len() {
        return Err(Error::Size {
            expected: energies.len(),
            found: sigma.len(),
        });
    }
    let n = sigma.len();
    if n < 3 {
        return Err(Error::DegenerateSpectrum("fewer than three grid points".into()));
    }
    let mut i = 0;
    for k in 1..n {
        if sigma[k] > sigma[i] {
            i = k;
        }
    }
    if !(sigma[i] > 0.0) {
        return Err(Error::DegenerateSpectrum("cross section has no positive maximum".into()));
    }
    if i == 0 || i == n - 1 {
        return Err(Error::DegenerateSpectrum(alloc::format!(
            "maximum at the grid edge, E = {}",
            energies[i]
        )));
    }
    let (ym, y0, yp) = (sigma[i - 1], sigma[i], sigma[i + 1]);
    let h = 0.5 * (energies[i + 1] - energies[i - 1]);
    let curv = ym - 2.0 * y0 + yp;
    let (shift, top) = if curv < 0.0 {
        let d = 0.5 * (ym - yp) / curv;
        (d, y0 - 0.25 * (ym - yp) * d)
    } else {
        (0.0, y0)
    };
    let e0 = energies[i] + shift * h;
    let half = 0.5 * top;

    let cross = |a: usize, b: usize| {
        let t = (half - sigma[a]) / (sigma[b] - sigma[a]);
        energies[a] + t * (energies[b] - energies[a])
    };
    let left = (1..=i)
        .rev()
        .find(|&k| sigma[k - 1] < half)
        .map(|k| cross(k - 1, k))
        .ok_or_else(|| Error::DegenerateSpectrum("no half-height crossing below the peak".into()))?;
    let right = (i..n - 1)
        .find(|&k| sigma[k + 1] < half)
        .map(|k| cross(k + 1, k))
        .ok_or_else(|| Error::DegenerateSpectrum("no half-height crossing above the peak".into()))?;
    Ok((e0, right - left))
}

/// Bare and dressed response, cross section and peak data on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseSpectrum {
    pub energies: Vec<f64>,
    pub r0: [Vec<Complex64>; 3],
    pub r_dressed: [Vec<Complex64>; 3],
    pub sigma_raw: Vec<f64>,
    /// `calibration · sigma_raw`.
    pub sigma: Vec<f64>,
    pub peak_e0: f64,
    pub width_fwhm: f64,
}

impl ResponseSpectrum {
    /// Run bare response, dressing, cross section and peak extraction.
    pub fn compute(
        ts: &TransitionSet,
        grid: &[f64],
        gamma: f64,
        kappas: [f64; 3],
        calibration: f64,
    ) -> Result<Self> {
        let r0 = bare_response(ts, grid, gamma)?;
        let r_dressed = dress_response(&r0, kappas, grid)?;
        let sigma_raw = cross_section(grid, &r_dressed);
        let sigma: Vec<f64> = sigma_raw.iter().map(|s| s * calibration).collect();
        let (peak_e0, width_fwhm) = peak_and_width(grid, &sigma)?;
        Ok(ResponseSpectrum {
            energies: grid.to_vec(),
            r0,
            r_dressed,
            sigma_raw,
            sigma,
            peak_e0,
            width_fwhm,
        })
    }
}
