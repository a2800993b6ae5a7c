#![allow(dead_code)]

use gdrq_core::{CMatrix, Complex64, Pauli, PauliSum, PauliTerm, StateVector};
use nalgebra::DMatrix;
use proptest::prelude::*;

pub type Dense = DMatrix<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn to_dense(m: &CMatrix) -> Dense {
    let d = m.dim();
    Dense::from_fn(d, d, |i, j| m[(i, j)])
}

pub fn dense_of(p: &PauliSum) -> Dense {
    to_dense(&p.dense_matrix().unwrap())
}

pub fn vector(s: &StateVector) -> nalgebra::DVector<Complex64> {
    nalgebra::DVector::from_column_slice(s.amplitudes())
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `kron(ops[n-1], ..., ops[0])`, so `ops[j]` acts on bit `j`.
pub fn kron_chain(ops: &[Dense]) -> Dense {
    ops.iter()
        .rev()
        .fold(Dense::identity(1, 1), |acc, m| acc.kronecker(m))
}

fn single(which: u8) -> Dense {
    let z = c(0.0);
    let o = c(1.0);
    match which {
        b'I' => Dense::from_row_slice(2, 2, &[o, z, z, o]),
        b'Z' => Dense::from_row_slice(2, 2, &[o, z, z, -o]),
        // |0><1|: empties an occupied mode
        b'-' => Dense::from_row_slice(2, 2, &[z, o, z, z]),
        _ => unreachable!(),
    }
}

/// Fermionic annihilator on mode `j` built straight from matrices.
pub fn fermion_annihilator(j: usize, n: usize) -> Dense {
    let ops: Vec<Dense> = (0..n)
        .map(|k| match k.cmp(&j) {
            std::cmp::Ordering::Less => single(b'Z'),
            std::cmp::Ordering::Equal => single(b'-'),
            std::cmp::Ordering::Greater => single(b'I'),
        })
        .collect();
    kron_chain(&ops)
}

pub fn pauli_strategy() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::I), Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

/// Hermitian sum of up to `max_terms` strings with real coefficients.
pub fn hermitian_sum(n: usize, max_terms: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec(
        (prop::collection::vec(pauli_strategy(), n), -2.0f64..2.0),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .map(|(axes, w)| PauliTerm::new(c(w), axes))
            .collect();
        PauliSum::from_terms(n, terms).unwrap()
    })
}

/// Sum with complex coefficients, not necessarily Hermitian.
pub fn complex_sum(n: usize, max_terms: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec(
        (prop::collection::vec(pauli_strategy(), n), -2.0f64..2.0, -2.0f64..2.0),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .map(|(axes, re, im)| PauliTerm::new(Complex64::new(re, im), axes))
            .collect();
        PauliSum::from_terms(n, terms).unwrap()
    })
}

pub fn state_strategy(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("non-zero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let amps = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            StateVector::from_amplitudes(amps).unwrap().normalized().unwrap()
        })
}

/// `|⟨a|b⟩|`, equal to 1 for states that agree up to a phase.
pub fn phase_overlap(a: &StateVector, b: &StateVector) -> f64 {
    a.inner(b).unwrap().norm()
}
