//! Pauli strings and weighted sums of Pauli strings.
//!
//! Qubit `j` is bit `j` of a basis-state index (little-endian). An axes vector
//! is indexed by qubit, so `axes[0]` acts on the least significant bit.
//!
//! Coefficients are complex; the phases produced by Pauli products
//! (`XY = iZ` and friends) are folded into them exactly. Sums built from
//! Hermitian operators end up with real coefficients.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{gates, CMatrix};
use crate::statevector::StateVector;

/// Largest register for which a dense matrix is materialised.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Coefficients below this modulus are dropped when a sum is canonicalised.
const DROP_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Single-qubit product `self * rhs` as (phase, result).
    pub fn mul(self, rhs: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match (self, rhs) {
            (I, p) | (p, I) => (one, p),
            (X, X) | (Y, Y) | (Z, Z) => (one, I),
            (X, Y) => (i, Z),
            (Y, X) => (-i, Z),
            (Y, Z) => (i, X),
            (Z, Y) => (-i, X),
            (Z, X) => (i, Y),
            (X, Z) => (-i, Y),
        }
    }

    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => CMatrix::identity(2),
            Pauli::X => gates::pauli_x(),
            Pauli::Y => gates::pauli_y(),
            Pauli::Z => gates::pauli_z(),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// `coeff * P_{n-1} ⊗ ... ⊗ P_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: Complex64,
    axes: Vec<Pauli>,
}

impl PauliTerm {
    pub fn new(coeff: Complex64, axes: Vec<Pauli>) -> Self {
        PauliTerm { coeff, axes }
    }

    pub fn identity(nqubits: usize, coeff: f64) -> Self {
        PauliTerm::new(Complex64::new(coeff, 0.0), vec![Pauli::I; nqubits])
    }

    /// Real-weighted term with the listed non-identity factors.
    pub fn from_ops(nqubits: usize, coeff: f64, ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut axes = vec![Pauli::I; nqubits];
        for &(q, p) in ops {
            if q >= nqubits {
                return Err(Error::Index(alloc::format!(
                    "qubit {q} outside a {nqubits}-qubit register"
                )));
            }
            axes[q] = p;
        }
        Ok(PauliTerm::new(Complex64::new(coeff, 0.0), axes))
    }

    pub fn nqubits(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Pauli] {
        &self.axes
    }

    pub fn is_identity(&self) -> bool {
        self.axes.iter().all(|&p| p == Pauli::I)
    }

    /// Operator product `self * rhs`, phase tracked exactly.
    pub fn multiply(&self, rhs: &PauliTerm) -> Result<PauliTerm> {
        if self.nqubits() != rhs.nqubits() {
            return Err(Error::Size {
                expected: self.nqubits(),
                found: rhs.nqubits(),
            });
        }
        let mut phase = Complex64::new(1.0, 0.0);
        let axes = self
            .axes
            .iter()
            .zip(&rhs.axes)
            .map(|(&a, &b)| {
                let (p, c) = a.mul(b);
                phase *= p;
                c
            })
            .collect();
        Ok(PauliTerm::new(self.coeff * rhs.coeff * phase, axes))
    }

    /// Masks describing the action on basis states: bit flips (X, Y), sign
    /// bits (Y, Z) and the number of Y factors.
    fn masks(&self) -> (usize, usize, u32) {
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut ny = 0u32;
        for (q, p) in self.axes.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    sign |= 1 << q;
                    ny += 1;
                }
                Pauli::Z => sign |= 1 << q,
            }
        }
        (flip, sign, ny)
    }

    /// Unit-modulus Pauli string times `phase` as a dense matrix.
    pub fn dense_unitary(&self, phase: Complex64) -> Result<CMatrix> {
        dense_string(&self.axes).map(|m| m.scale(phase))
    }

    fn cmp_axes(&self, other: &PauliTerm) -> Ordering {
        // highest qubit first, so Z0 < Z1 < Z2 in canonical order
        self.axes.iter().rev().cmp(other.axes.iter().rev())
    }

    fn label(&self) -> String {
        let mut s = String::new();
        for (q, p) in self.axes.iter().enumerate() {
            if *p != Pauli::I {
                s.push(p.symbol());
                s.push_str(&alloc::format!("{q}"));
            }
        }
        if s.is_empty() {
            s.push('I');
        }
        s
    }
}

fn dense_string(axes: &[Pauli]) -> Result<CMatrix> {
    if axes.len() > MAX_DENSE_QUBITS {
        return Err(Error::Capacity(alloc::format!(
            "dense matrix for {} qubits exceeds the {MAX_DENSE_QUBITS}-qubit limit",
            axes.len()
        )));
    }
    let mut m = CMatrix::identity(1);
    for p in axes.iter().rev() {
        m = m.kron(&p.matrix());
    }
    Ok(m)
}

/// Canonical weighted sum of Pauli strings on `nqubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    nqubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn zero(nqubits: usize) -> Self {
        PauliSum {
            nqubits,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(nqubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.nqubits() != nqubits) {
            return Err(Error::Size {
                expected: nqubits,
                found: t.nqubits(),
            });
        }
        Ok(PauliSum::canonical(nqubits, terms))
    }

    fn canonical(nqubits: usize, mut terms: Vec<PauliTerm>) -> Self {
        terms.sort_by(|a, b| a.cmp_axes(b));
        let mut merged: Vec<PauliTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.axes == t.axes => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff.norm() > DROP_TOLERANCE);
        PauliSum {
            nqubits,
            terms: merged,
        }
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the term with the given axes (zero when absent).
    pub fn coefficient(&self, axes: &[Pauli]) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.axes == axes)
            .map_or(Complex64::new(0.0, 0.0), |t| t.coeff)
    }

    pub fn add(&self, rhs: &PauliSum) -> Result<PauliSum> {
        self.check_size(rhs.nqubits)?;
        let terms = self.terms.iter().chain(&rhs.terms).cloned().collect();
        Ok(PauliSum::canonical(self.nqubits, terms))
    }

    pub fn scale(&self, s: Complex64) -> PauliSum {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliTerm::new(t.coeff * s, t.axes.clone()))
            .collect();
        PauliSum::canonical(self.nqubits, terms)
    }

    pub fn scale_real(&self, s: f64) -> PauliSum {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Operator product `self * rhs`.
    pub fn multiply(&self, rhs: &PauliSum) -> Result<PauliSum> {
        self.check_size(rhs.nqubits)?;
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(a.multiply(b)?);
            }
        }
        Ok(PauliSum::canonical(self.nqubits, terms))
    }

    pub fn adjoint(&self) -> PauliSum {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliTerm::new(t.coeff.conj(), t.axes.clone()))
            .collect();
        PauliSum::canonical(self.nqubits, terms)
    }

    /// True when every coefficient is real within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.coeff.im.abs() <= tol)
    }

    /// Σ |c_i|, the LCU normalisation Λ.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    /// `Σ c_i P_i |s⟩`; the result is generally unnormalised.
    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        if s.nqubits() != self.nqubits {
            return Err(Error::Size {
                expected: self.nqubits,
                found: s.nqubits(),
            });
        }
        let amps = s.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for t in &self.terms {
            let (flip, sign, ny) = t.masks();
            let base = t.coeff * Complex64::new(0.0, 1.0).powu(ny);
            for (k, &a) in amps.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let c = if (k & sign).count_ones() % 2 == 1 {
                    -base
                } else {
                    base
                };
                out[k ^ flip] += c * a;
            }
        }
        StateVector::from_amplitudes(out)
    }

    /// Dense `2^n x 2^n` realisation by Kronecker products.
    pub fn dense_matrix(&self) -> Result<CMatrix> {
        if self.nqubits > MAX_DENSE_QUBITS {
            return Err(Error::Capacity(alloc::format!(
                "dense matrix for {} qubits exceeds the {MAX_DENSE_QUBITS}-qubit limit",
                self.nqubits
            )));
        }
        let mut m = CMatrix::zeros(1 << self.nqubits);
        for t in &self.terms {
            m = m.add(&dense_string(&t.axes)?.scale(t.coeff))?;
        }
        Ok(m)
    }

    fn check_size(&self, other: usize) -> Result<()> {
        if self.nqubits != other {
            return Err(Error::Size {
                expected: self.nqubits,
                found: other,
            });
        }
        Ok(())
    }

    /// Compact rendering with every coefficient divided by `unit`, e.g.
    /// `6I-0.75Z0-1.25Z1` for a Hamiltonian in units of ħω.
    pub fn compact(&self, unit: f64) -> String {
        let mut s = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            let c = t.coeff.re / unit;
            if k > 0 && c >= 0.0 {
                s.push('+');
            }
            s.push_str(&alloc::format!("{c}{}", t.label()));
        }
        s
    }
}

impl fmt::Display for PauliSum {
    /// Log form: `6.000*I - 0.750*Z0 - 1.250*Z1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let c = t.coeff;
            let label = t.label();
            if c.im == 0.0 {
                let sep = match (k, c.re < 0.0) {
                    (0, true) => "-",
                    (0, false) => "",
                    (_, true) => " - ",
                    (_, false) => " + ",
                };
                write!(f, "{sep}{:.3}*{label}", c.re.abs())?;
            } else if c.re == 0.0 {
                let sep = match (k, c.im < 0.0) {
                    (0, true) => "-",
                    (0, false) => "",
                    (_, true) => " - ",
                    (_, false) => " + ",
                };
                write!(f, "{sep}{:.3}i*{label}", c.im.abs())?;
            } else {
                let sep = if k == 0 { "" } else { " + " };
                write!(f, "{sep}({:.3}{:+.3}i)*{label}", c.re, c.im)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::StateVector;
    use alloc::string::ToString;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn term(n: usize, coeff: f64, ops: &[(usize, Pauli)]) -> PauliTerm {
        PauliTerm::from_ops(n, coeff, ops).unwrap()
    }

    #[test]
    fn x_times_y_is_i_z() {
        let p = term(1, 1.0, &[(0, Pauli::X)])
            .multiply(&term(1, 1.0, &[(0, Pauli::Y)]))
            .unwrap();
        assert_eq!(p.axes(), &[Pauli::Z]);
        assert_eq!(p.coeff, c(0.0, 1.0));
    }

    #[test]
    fn z_squared_is_identity() {
        let z = term(1, 1.0, &[(0, Pauli::Z)]);
        let p = z.multiply(&z).unwrap();
        assert!(p.is_identity());
        assert_eq!(p.coeff, c(1.0, 0.0));
    }

    #[test]
    fn two_qubit_product_matches_dense() {
        let a = term(2, 0.5, &[(0, Pauli::X), (1, Pauli::Z)]);
        let b = term(2, 0.5, &[(0, Pauli::Y), (1, Pauli::Z)]);
        let p = a.multiply(&b).unwrap();
        assert_eq!(p.axes(), &[Pauli::Z, Pauli::I]);
        assert_eq!(p.coeff, c(0.0, 0.25));

        let da = PauliSum::from_terms(2, vec![a]).unwrap().dense_matrix().unwrap();
        let db = PauliSum::from_terms(2, vec![b]).unwrap().dense_matrix().unwrap();
        let dp = PauliSum::from_terms(2, vec![p]).unwrap().dense_matrix().unwrap();
        assert!(da.matmul(&db).unwrap().max_abs_diff(&dp) < 1e-15);
    }

    #[test]
    fn multiplication_table_matches_matrices() {
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let (phase, r) = a.mul(b);
                let lhs = a.matrix().matmul(&b.matrix()).unwrap();
                let rhs = r.matrix().scale(phase);
                assert!(lhs.max_abs_diff(&rhs) < 1e-15, "{a:?}{b:?}");
            }
        }
    }

    #[test]
    fn mismatched_sizes_rejected() {
        let a = term(1, 1.0, &[(0, Pauli::X)]);
        let b = term(2, 1.0, &[(0, Pauli::X)]);
        assert!(matches!(a.multiply(&b), Err(Error::Size { .. })));
        let sa = PauliSum::from_terms(1, vec![a]).unwrap();
        let sb = PauliSum::from_terms(2, vec![b]).unwrap();
        assert!(sa.add(&sb).is_err());
        assert!(sa.apply(&StateVector::zero_state(2).unwrap()).is_err());
    }

    #[test]
    fn opposite_terms_cancel() {
        let a = PauliSum::from_terms(1, vec![term(1, 0.75, &[(0, Pauli::Z)])]).unwrap();
        let b = PauliSum::from_terms(1, vec![term(1, -0.75, &[(0, Pauli::Z)])]).unwrap();
        assert!(a.add(&b).unwrap().is_empty());
    }

    #[test]
    fn identity_plus_z_has_two_terms() {
        let a = PauliSum::from_terms(4, vec![PauliTerm::identity(4, 6.0)]).unwrap();
        let b = PauliSum::from_terms(4, vec![term(4, -0.75, &[(0, Pauli::Z)])]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.terms().len(), 2);
        assert_eq!(s.to_string(), "6.000*I - 0.750*Z0");
    }

    #[test]
    fn canonical_order_puts_identity_first() {
        let terms = vec![
            term(3, -1.75, &[(2, Pauli::Z)]),
            term(3, -0.75, &[(0, Pauli::Z)]),
            PauliTerm::identity(3, 6.0),
            term(3, -1.25, &[(1, Pauli::Z)]),
        ];
        let s = PauliSum::from_terms(3, terms).unwrap();
        assert_eq!(s.to_string(), "6.000*I - 0.750*Z0 - 1.250*Z1 - 1.750*Z2");
        assert_eq!(s.compact(1.0), "6I-0.75Z0-1.25Z1-1.75Z2");
    }

    #[test]
    fn x_flips_qubit_zero() {
        let x = PauliSum::from_terms(2, vec![term(2, 1.0, &[(0, Pauli::X)])]).unwrap();
        let out = x.apply(&StateVector::zero_state(2).unwrap()).unwrap();
        assert_eq!(out.amplitudes()[1], c(1.0, 0.0));
        assert_eq!(out.amplitudes()[0], c(0.0, 0.0));
    }

    #[test]
    fn dense_single_qubit_cases() {
        let z = PauliSum::from_terms(1, vec![term(1, 1.0, &[(0, Pauli::Z)])]).unwrap();
        let dz = z.dense_matrix().unwrap();
        assert_eq!(dz, CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap());
        let x = PauliSum::from_terms(1, vec![term(1, 1.0, &[(0, Pauli::X)])]).unwrap();
        let dx = x.dense_matrix().unwrap();
        assert_eq!(dx, CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap());
    }

    #[test]
    fn dense_guard() {
        let big = PauliSum::from_terms(13, vec![PauliTerm::identity(13, 1.0)]).unwrap();
        assert!(matches!(big.dense_matrix(), Err(Error::Capacity(_))));
    }

    #[test]
    fn y_acts_with_phases() {
        // Y|0> = i|1>, Y|1> = -i|0>
        let y = PauliSum::from_terms(1, vec![term(1, 1.0, &[(0, Pauli::Y)])]).unwrap();
        let out0 = y.apply(&StateVector::basis(1, 0).unwrap()).unwrap();
        assert_eq!(out0.amplitudes()[1], c(0.0, 1.0));
        let out1 = y.apply(&StateVector::basis(1, 1).unwrap()).unwrap();
        assert_eq!(out1.amplitudes()[0], c(0.0, -1.0));
    }

    #[test]
    fn dense_term_is_scaled_unitary() {
        let t = term(3, 2.5, &[(0, Pauli::X), (2, Pauli::Y)]);
        let m = PauliSum::from_terms(3, vec![t]).unwrap().dense_matrix().unwrap();
        let mm = m.adjoint().matmul(&m).unwrap();
        let id = CMatrix::identity(8).scale(c(6.25, 0.0));
        assert!(mm.max_abs_diff(&id) < 1e-12);
    }
}
