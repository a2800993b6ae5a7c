//! Circuit-level subroutines: excited-state preparation, the SWAP test and
//! LCU block encoding, plus the energy and transition-strength estimators
//! built from them.
//!
//! Every routine runs in one of two [`Mode`]s. `Exact` reads probabilities
//! straight off the amplitudes; `Sampled` replaces each of them with a
//! shot-count frequency drawn from the caller's [`RngStream`].

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{gates, CMatrix};
use crate::pauli::PauliSum;
use crate::rng::RngStream;
use crate::statevector::{sample_counts, StateVector, MAX_QUBITS, MIN_SELECTION_PROBABILITY};

const HERMITIAN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Analytic probabilities.
    Exact,
    /// Frequencies from `shots` measurements; post-selection restarts at most
    /// `attempt_cap` times.
    Sampled { shots: u64, attempt_cap: u32 },
}

impl Mode {
    pub fn sampled(shots: u64) -> Self {
        Mode::Sampled {
            shots,
            attempt_cap: 1000,
        }
    }

    fn check(&self) -> Result<()> {
        match *self {
            Mode::Sampled { shots: 0, .. } => {
                Err(Error::Validation("shots must be at least 1".into()))
            }
            Mode::Sampled { attempt_cap: 0, .. } => {
                Err(Error::Validation("attempt_cap must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Normalised `sin(γO)|Ψ₀⟩` and the probability of reaching it.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedState {
    pub state: StateVector,
    /// `⟨Ψ₀|sin²(γO)|Ψ₀⟩` (exact) or the measured ancilla frequency (sampled).
    pub success_probability: f64,
    /// Circuit executions until the ancilla read 1; 1 in exact mode.
    pub attempts: u32,
}

/// Normalised `H|ψ⟩` from the LCU circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct LcuResult {
    pub state: StateVector,
    /// `‖H|ψ⟩‖² / Λ²` (exact) or the measured all-zero ancilla frequency.
    pub success_probability: f64,
    /// Λ = Σ |c_i|.
    pub lambda: f64,
}

/// SWAP-test estimate of `|⟨φ|ψ⟩|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapEstimate {
    /// `raw` clamped to [0, 1].
    pub value: f64,
    /// `P(0) − P(1)` of the ancilla.
    pub raw: f64,
    /// `None` in exact mode.
    pub shots: Option<u64>,
    /// `√((1 − raw²)/shots)`, never below `1/shots`; zero in exact mode.
    pub standard_error: f64,
}

/// Excited-state preparation used by [`transition_strength`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StatePrep {
    /// Controlled time evolution; the strength is `p/γ² · overlap`.
    TimeEvolution { gamma: f64 },
    /// LCU block encoding of the operator; the strength is `Λ² p · overlap`.
    Lcu,
}

fn check_register(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::Capacity(alloc::format!(
            "circuit needs {n} qubits, the simulator holds {MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Single-shot ancilla readings until the success branch shows up.
fn restart_until(p_success: f64, cap: u32, rng: &mut RngStream) -> Option<u32> {
    let probs = [1.0 - p_success, p_success];
    (1..=cap).find(|_| sample_counts(&probs, 1, rng)[1] == 1)
}

/// Prepare `sin(γO)|Ψ₀⟩ / ‖·‖` with one ancilla.
///
/// The ancilla (top qubit) goes through H, selects `exp(+iγO)` on 0 and
/// `exp(−iγO)` on 1, then H and Z, which leaves
/// `|0⟩ cos(γO)|Ψ₀⟩ − i|1⟩ sin(γO)|Ψ₀⟩`. The register is kept when the
/// ancilla reads 1.
pub fn prepare_excited(
    psi0: &StateVector,
    o: &PauliSum,
    gamma: f64,
    mode: Mode,
    rng: &mut RngStream,
) -> Result<PreparedState> {
    mode.check()?;
    let n = psi0.nqubits();
    if o.nqubits() != n {
        return Err(Error::Size {
            expected: n,
            found: o.nqubits(),
        });
    }
    if !o.is_hermitian(HERMITIAN_TOLERANCE) {
        return Err(Error::Validation("excitation operator is not Hermitian".into()));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Validation(alloc::format!("gamma = {gamma} must be positive")));
    }
    check_register(n + 1)?;

    let m = o.dense_matrix()?;
    let branches = [
        CMatrix::unitary_evolution(&m, -gamma),
        CMatrix::unitary_evolution(&m, gamma),
    ];
    let system: Vec<usize> = (0..n).collect();
    let anc = n;
    let mut s = psi0.tensor(&StateVector::zero_state(1)?)?;
    s.apply_unitary(&gates::hadamard(), &[anc])?;
    s.apply_multiplexed(&branches, &[anc], &system)?;
    s.apply_unitary(&gates::hadamard(), &[anc])?;
    s.apply_unitary(&gates::pauli_z(), &[anc])?;

    let (post, p) = match s.post_select(anc, true) {
        Ok(r) => r,
        Err(Error::ImpossibleOutcome { probability, .. }) => {
            return Err(Error::PreparationImpossible(alloc::format!(
                "sin(γO)|Ψ₀⟩ has squared norm {probability:e}"
            )))
        }
        Err(e) => return Err(e),
    };
    let state = post.restrict(&[(anc, true)])?;

    match mode {
        Mode::Exact => Ok(PreparedState {
            state,
            success_probability: p,
            attempts: 1,
        }),
        Mode::Sampled { shots, attempt_cap } => {
            let attempts = restart_until(p, attempt_cap, rng).ok_or_else(|| {
                Error::PreparationImpossible(alloc::format!(
                    "ancilla never read 1 in {attempt_cap} attempts (p = {p:e})"
                ))
            })?;
            let hist = s.sample(&[anc], shots, rng)?;
            Ok(PreparedState {
                state,
                success_probability: hist.frequency("1"),
                attempts,
            })
        }
    }
}

/// SWAP test between two registers of equal width.
pub fn swap_test(
    psi: &StateVector,
    phi: &StateVector,
    mode: Mode,
    rng: &mut RngStream,
) -> Result<OverlapEstimate> {
    mode.check()?;
    let n = psi.nqubits();
    if phi.nqubits() != n {
        return Err(Error::Size {
            expected: n,
            found: phi.nqubits(),
        });
    }
    check_register(2 * n + 1)?;
    let anc = 2 * n;
    let mut s = psi.tensor(phi)?.tensor(&StateVector::zero_state(1)?)?;
    s.apply_unitary(&gates::hadamard(), &[anc])?;
    let swap = gates::swap();
    for q in 0..n {
        s.apply_controlled(&swap, anc, &[q, n + q])?;
    }
    s.apply_unitary(&gates::hadamard(), &[anc])?;

    match mode {
        Mode::Exact => {
            let raw = s.measure_probability(anc, false)? - s.measure_probability(anc, true)?;
            Ok(OverlapEstimate {
                value: raw.clamp(0.0, 1.0),
                raw,
                shots: None,
                standard_error: 0.0,
            })
        }
        Mode::Sampled { shots, .. } => {
            let hist = s.sample(&[anc], shots, rng)?;
            let raw = (hist.count("0") as f64 - hist.count("1") as f64) / shots as f64;
            let se = ((1.0 - raw * raw) / shots as f64).sqrt().max(1.0 / shots as f64);
            Ok(OverlapEstimate {
                value: raw.clamp(0.0, 1.0),
                raw,
                shots: Some(shots),
                standard_error: se,
            })
        }
    }
}

/// Householder reflection taking `e₀` to the unit vector `v`; real and
/// symmetric, hence its own inverse.
fn prepare_unitary(v: &[f64]) -> CMatrix {
    let d = v.len();
    let mut u: Vec<f64> = v.iter().map(|x| -x).collect();
    u[0] += 1.0;
    let norm2: f64 = u.iter().map(|x| x * x).sum();
    let mut m = CMatrix::identity(d);
    if norm2 < 1e-30 {
        return m;
    }
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] -= Complex64::new(2.0 * u[i] * u[j] / norm2, 0.0);
        }
    }
    m
}

/// Apply `H = Σ c_i P_i` to `ψ` with a prepare–select–unprepare circuit.
///
/// `a_i = |c_i|` sets the prepared amplitudes and the phase `c_i/|c_i|` rides
/// on the selected Pauli string. The register state is kept when every
/// ancilla reads 0.
pub fn lcu_apply(h: &PauliSum, psi: &StateVector, mode: Mode, rng: &mut RngStream) -> Result<LcuResult> {
    mode.check()?;
    let n = psi.nqubits();
    if h.nqubits() != n {
        return Err(Error::Size {
            expected: n,
            found: h.nqubits(),
        });
    }
    if h.is_empty() {
        return Err(Error::Annihilated { norm: 0.0 });
    }
    let k = h.terms().len();
    let n_anc = (usize::BITS - (k - 1).leading_zeros()).max(1) as usize;
    check_register(n + n_anc)?;

    let lambda = h.one_norm();
    let mut amps = vec![0.0; 1 << n_anc];
    let mut select = Vec::with_capacity(k);
    for (slot, t) in amps.iter_mut().zip(h.terms()) {
        let a = t.coeff.norm();
        *slot = (a / lambda).sqrt();
        select.push(t.dense_unitary(t.coeff / a)?);
    }
    let v = prepare_unitary(&amps);
    let ancillas: Vec<usize> = (n..n + n_anc).collect();
    let system: Vec<usize> = (0..n).collect();

    let mut s = psi.tensor(&StateVector::zero_state(n_anc)?)?;
    s.apply_unitary(&v, &ancillas)?;
    s.apply_multiplexed(&select, &ancillas, &system)?;
    s.apply_unitary(&v, &ancillas)?;

    let mut post = s.clone();
    let mut p = 1.0;
    for &q in &ancillas {
        match post.post_select(q, false) {
            Ok((next, pq)) => {
                post = next;
                p *= pq;
            }
            Err(Error::ImpossibleOutcome { probability, .. }) => {
                return Err(Error::Annihilated {
                    norm: lambda * (p * probability).sqrt(),
                })
            }
            Err(e) => return Err(e),
        }
    }
    if p < MIN_SELECTION_PROBABILITY {
        return Err(Error::Annihilated {
            norm: lambda * p.sqrt(),
        });
    }
    let fixed: Vec<(usize, bool)> = ancillas.iter().map(|&q| (q, false)).collect();
    let state = post.restrict(&fixed)?;

    let success_probability = match mode {
        Mode::Exact => p,
        Mode::Sampled { shots, .. } => {
            let zeros = "0".repeat(n_anc);
            s.sample(&ancillas, shots, rng)?.frequency(&zeros)
        }
    };
    Ok(LcuResult {
        state,
        success_probability,
        lambda,
    })
}

/// `|⟨ψ|H|ψ⟩|` as `Λ √p √overlap(ψ, Hψ/‖Hψ‖)`. A state annihilated by `H`
/// has energy 0.
pub fn energy_expectation(h: &PauliSum, psi: &StateVector, mode: Mode, rng: &mut RngStream) -> Result<f64> {
    let lcu = match lcu_apply(h, psi, mode, rng) {
        Ok(r) => r,
        Err(Error::Annihilated { .. }) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    let ov = swap_test(psi, &lcu.state, mode, rng)?;
    Ok(lcu.lambda * lcu.success_probability.sqrt() * ov.value.sqrt())
}

/// Estimate `|⟨Ψ_ν|D|Ψ₀⟩|²` by preparing `D|Ψ₀⟩` and SWAP-testing it
/// against `|Ψ_ν⟩`. Negative shot-noise estimates are reported as 0.
pub fn transition_strength(
    psi0: &StateVector,
    d: &PauliSum,
    nu: &StateVector,
    prep: StatePrep,
    mode: Mode,
    rng: &mut RngStream,
) -> Result<f64> {
    let (scale, state) = match prep {
        StatePrep::TimeEvolution { gamma } => {
            let p = prepare_excited(psi0, d, gamma, mode, rng)?;
            (p.success_probability / (gamma * gamma), p.state)
        }
        StatePrep::Lcu => match lcu_apply(d, psi0, mode, rng) {
            Ok(r) => (r.lambda * r.lambda * r.success_probability, r.state),
            Err(Error::Annihilated { .. }) => return Ok(0.0),
            Err(e) => return Err(e),
        },
    };
    let ov = swap_test(&state, nu, mode, rng)?;
    Ok((scale * ov.raw).max(0.0))
}
