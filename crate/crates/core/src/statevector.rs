//! Dense statevector simulator.
//!
//! Basis index bit `j` is qubit `j`. Bit strings (for `init_basis_state` and histogram
//! keys) are written most significant qubit first, so the rightmost character
//! is qubit 0: `"10"` on two qubits is index 2.
//!
//! Gates mutate an owned state in place. Amplitudes are exact; randomness only
//! enters through [`StateVector::sample`] and post-selection restarts driven by
//! the caller.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::rng::RngStream;

pub const MAX_QUBITS: usize = 16;

/// Tolerance for unitarity checks on gate matrices.
pub const UNITARY_TOLERANCE: f64 = 1e-10;
/// States handed to sampling or post-selection must be normalised this well.
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Post-selection below this probability is treated as impossible.
pub const MIN_SELECTION_PROBABILITY: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    nqubits: usize,
    amps: Vec<Complex64>,
}

/// Measurement counts keyed by bit string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotHistogram {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
}

impl ShotHistogram {
    pub fn count(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn frequency(&self, key: &str) -> f64 {
        self.count(key) as f64 / self.shots as f64
    }
}

fn check_qubits(nqubits: usize) -> Result<()> {
    if nqubits == 0 || nqubits > MAX_QUBITS {
        return Err(Error::Capacity(alloc::format!(
            "{nqubits} qubits outside the supported range 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// |0...0⟩.
    pub fn zero_state(nqubits: usize) -> Result<Self> {
        Self::basis(nqubits, 0)
    }

    /// Computational basis state with the given index.
    pub fn basis(nqubits: usize, index: usize) -> Result<Self> {
        check_qubits(nqubits)?;
        let dim = 1usize << nqubits;
        if index >= dim {
            return Err(Error::Index(alloc::format!(
                "basis index {index} outside dimension {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { nqubits, amps })
    }

    /// Basis state from a bit string such as `"0110"`.
    pub fn init_basis_state(nqubits: usize, bits: &str) -> Result<Self> {
        if bits.chars().count() != nqubits {
            return Err(Error::Size {
                expected: nqubits,
                found: bits.chars().count(),
            });
        }
        let mut index = 0usize;
        for (pos, ch) in bits.chars().enumerate() {
            let q = nqubits - 1 - pos;
            match ch {
                '0' => {}
                '1' => index |= 1 << q,
                other => {
                    return Err(Error::Validation(alloc::format!(
                        "bit string contains '{other}'"
                    )))
                }
            }
        }
        Self::basis(nqubits, index)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::Validation(alloc::format!(
                "amplitude vector length {dim} is not a power of two"
            )));
        }
        let nqubits = dim.trailing_zeros() as usize;
        check_qubits(nqubits)?;
        Ok(StateVector { nqubits, amps })
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<StateVector> {
        let n = self.norm_sqr().sqrt();
        if n < MIN_SELECTION_PROBABILITY.sqrt() {
            return Err(Error::Annihilated { norm: n });
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, s: Complex64) -> StateVector {
        StateVector {
            nqubits: self.nqubits,
            amps: self.amps.iter().map(|&a| a * s).collect(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.nqubits != other.nqubits {
            return Err(Error::Size {
                expected: self.nqubits,
                found: other.nqubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b))
    }

    /// Product state with `self` on the low qubits and `high` above it.
    pub fn tensor(&self, high: &StateVector) -> Result<StateVector> {
        check_qubits(self.nqubits + high.nqubits)?;
        let mut amps = Vec::with_capacity(self.dim() * high.dim());
        for h in &high.amps {
            for l in &self.amps {
                amps.push(h * l);
            }
        }
        Ok(StateVector {
            nqubits: self.nqubits + high.nqubits,
            amps,
        })
    }

    /// Amplitudes of the remaining qubits with the listed qubits fixed to the
    /// given values. Unnormalised; remaining qubits keep their relative order.
    pub fn restrict(&self, fixed: &[(usize, bool)]) -> Result<StateVector> {
        let mut fixed_mask = 0usize;
        let mut fixed_value = 0usize;
        for &(q, v) in fixed {
            self.check_index(q)?;
            if fixed_mask & (1 << q) != 0 {
                return Err(Error::Index(alloc::format!("qubit {q} fixed twice")));
            }
            fixed_mask |= 1 << q;
            if v {
                fixed_value |= 1 << q;
            }
        }
        let free: Vec<usize> = (0..self.nqubits)
            .filter(|q| fixed_mask & (1 << q) == 0)
            .collect();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << free.len()];
        for (k, slot) in amps.iter_mut().enumerate() {
            let mut idx = fixed_value;
            for (b, &q) in free.iter().enumerate() {
                if k & (1 << b) != 0 {
                    idx |= 1 << q;
                }
            }
            *slot = self.amps[idx];
        }
        StateVector::from_amplitudes(amps)
    }

    fn check_index(&self, q: usize) -> Result<()> {
        if q >= self.nqubits {
            return Err(Error::Index(alloc::format!(
                "qubit {q} outside a {}-qubit register",
                self.nqubits
            )));
        }
        Ok(())
    }

    fn check_distinct(&self, qubits: &[usize]) -> Result<usize> {
        let mut mask = 0usize;
        for &q in qubits {
            self.check_index(q)?;
            if mask & (1 << q) != 0 {
                return Err(Error::Index(alloc::format!("qubit {q} listed twice")));
            }
            mask |= 1 << q;
        }
        Ok(mask)
    }

    fn check_gate(u: &CMatrix, ntargets: usize) -> Result<()> {
        if u.dim() != 1 << ntargets {
            return Err(Error::Size {
                expected: 1 << ntargets,
                found: u.dim(),
            });
        }
        if !u.is_unitary(UNITARY_TOLERANCE) {
            return Err(Error::Validation("gate matrix is not unitary".into()));
        }
        Ok(())
    }

    /// Offsets of the `2^k` target-subspace amplitudes relative to a base index.
    fn offsets(targets: &[usize]) -> Vec<usize> {
        (0..1usize << targets.len())
            .map(|j| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| j & (1 << b) != 0)
                    .fold(0, |acc, (_, &q)| acc | (1 << q))
            })
            .collect()
    }

    fn act(&mut self, u: &CMatrix, base: usize, offsets: &[usize], buf: &mut [Complex64]) {
        let d = offsets.len();
        for (slot, &o) in buf.iter_mut().zip(offsets) {
            *slot = self.amps[base | o];
        }
        let m = u.as_slice();
        for (r, &o) in offsets.iter().enumerate() {
            let row = &m[r * d..(r + 1) * d];
            self.amps[base | o] = row
                .iter()
                .zip(buf.iter())
                .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b);
        }
    }

    /// Apply `u` to `targets`; `targets[0]` is the low bit of `u`'s index.
    pub fn apply_unitary(&mut self, u: &CMatrix, targets: &[usize]) -> Result<()> {
        let mask = self.check_distinct(targets)?;
        Self::check_gate(u, targets.len())?;
        let offsets = Self::offsets(targets);
        let mut buf = vec![Complex64::new(0.0, 0.0); offsets.len()];
        for base in 0..self.dim() {
            if base & mask == 0 {
                self.act(u, base, &offsets, &mut buf);
            }
        }
        Ok(())
    }

    /// Apply `u` to `targets` on the control = 1 subspace.
    pub fn apply_controlled(&mut self, u: &CMatrix, control: usize, targets: &[usize]) -> Result<()> {
        let mask = self.check_distinct(targets)?;
        self.check_index(control)?;
        if mask & (1 << control) != 0 {
            return Err(Error::Index(alloc::format!(
                "control qubit {control} is also a target"
            )));
        }
        Self::check_gate(u, targets.len())?;
        let offsets = Self::offsets(targets);
        let mut buf = vec![Complex64::new(0.0, 0.0); offsets.len()];
        for base in 0..self.dim() {
            if base & mask == 0 && base & (1 << control) != 0 {
                self.act(u, base, &offsets, &mut buf);
            }
        }
        Ok(())
    }

    /// Select operator `Σ_i |i⟩⟨i| ⊗ U_i`: applies `unitaries[i]` to `targets`
    /// when the controls read `i` (`controls[0]` is the low bit). Control values
    /// without a listed unitary act as identity.
    pub fn apply_multiplexed(
        &mut self,
        unitaries: &[CMatrix],
        controls: &[usize],
        targets: &[usize],
    ) -> Result<()> {
        let tmask = self.check_distinct(targets)?;
        let cmask = self.check_distinct(controls)?;
        if tmask & cmask != 0 {
            return Err(Error::Index("control and target registers overlap".into()));
        }
        if unitaries.len() > 1 << controls.len() {
            return Err(Error::Capacity(alloc::format!(
                "{} unitaries need more than {} control qubits",
                unitaries.len(),
                controls.len()
            )));
        }
        for u in unitaries {
            Self::check_gate(u, targets.len())?;
        }
        let offsets = Self::offsets(targets);
        let mut buf = vec![Complex64::new(0.0, 0.0); offsets.len()];
        for base in 0..self.dim() {
            if base & tmask != 0 {
                continue;
            }
            let sel = controls
                .iter()
                .enumerate()
                .filter(|(_, &q)| base & (1 << q) != 0)
                .fold(0usize, |acc, (b, _)| acc | (1 << b));
            if let Some(u) = unitaries.get(sel) {
                self.act(u, base, &offsets, &mut buf);
            }
        }
        Ok(())
    }

    fn require_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Validation(alloc::format!(
                "state norm² {n} is not 1"
            )));
        }
        Ok(())
    }

    /// Exact probability of reading `outcome` on `qubit`.
    pub fn measure_probability(&self, qubit: usize, outcome: bool) -> Result<f64> {
        self.check_index(qubit)?;
        let bit = 1usize << qubit;
        let p: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(k, _)| (k & bit != 0) == outcome)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        Ok(p.clamp(0.0, 1.0))
    }

    /// Project `qubit` onto `outcome` and renormalise. The measured qubit stays
    /// in the register, now in a product state with the rest.
    pub fn post_select(&self, qubit: usize, outcome: bool) -> Result<(StateVector, f64)> {
        self.require_normalized()?;
        let p = self.measure_probability(qubit, outcome)?;
        if p < MIN_SELECTION_PROBABILITY {
            return Err(Error::ImpossibleOutcome {
                qubit,
                outcome,
                probability: p,
            });
        }
        let bit = 1usize << qubit;
        let scale = 1.0 / p.sqrt();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                if (k & bit != 0) == outcome {
                    a * scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok((
            StateVector {
                nqubits: self.nqubits,
                amps,
            },
            p,
        ))
    }

    /// Exact outcome distribution over `qubits`; entry `j` has bit `b` equal
    /// to the reading of `qubits[b]`.
    pub fn marginal(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        self.check_distinct(qubits)?;
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (k, a) in self.amps.iter().enumerate() {
            let j = qubits
                .iter()
                .enumerate()
                .filter(|(_, &q)| k & (1 << q) != 0)
                .fold(0usize, |acc, (b, _)| acc | (1 << b));
            probs[j] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Multinomial draw of `shots` measurements of `qubits`.
    ///
    /// Histogram keys list `qubits` last-to-first, so the rightmost character
    /// is `qubits[0]`.
    pub fn sample(&self, qubits: &[usize], shots: u64, rng: &mut RngStream) -> Result<ShotHistogram> {
        if shots == 0 {
            return Err(Error::Validation("shots must be at least 1".into()));
        }
        if qubits.is_empty() {
            return Err(Error::Validation("no qubits to measure".into()));
        }
        self.require_normalized()?;
        let counts = sample_counts(&self.marginal(qubits)?, shots, rng);
        let width = qubits.len();
        let counts = counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(j, c)| {
                let key: String = (0..width)
                    .rev()
                    .map(|b| if j & (1 << b) != 0 { '1' } else { '0' })
                    .collect();
                (key, c)
            })
            .collect();
        Ok(ShotHistogram { counts, shots })
    }
}

/// Per-shot inverse-CDF draws from a discrete distribution.
pub(crate) fn sample_counts(probs: &[f64], shots: u64, rng: &mut RngStream) -> Vec<u64> {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    // the last non-empty bucket absorbs rounding in the cumulative sum
    let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u = rng.next_f64() * total;
        let j = cdf.partition_point(|&c| c <= u).min(last);
        counts[j] += 1;
    }
    counts
}
