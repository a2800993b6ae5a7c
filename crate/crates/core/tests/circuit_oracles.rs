mod common;

use common::*;
use gdrq_core::algorithms::{lcu_apply, prepare_excited, swap_test, transition_strength, Mode, StatePrep};
use gdrq_core::{Complex64, Error, PauliSum, RngStream, StateVector};
use nalgebra::{DVector, SymmetricEigen};
use proptest::prelude::*;

/// `f(M) v` through the eigen-decomposition of a Hermitian matrix.
fn apply_function(m: &Dense, v: &DVector<Complex64>, f: impl Fn(f64) -> f64) -> DVector<Complex64> {
    let eig = SymmetricEigen::new(m.clone());
    let fd = Dense::from_diagonal(&eig.eigenvalues.map(|x| c(f(x))));
    &eig.eigenvectors * fd * eig.eigenvectors.adjoint() * v
}

fn state_of(v: &DVector<Complex64>) -> StateVector {
    StateVector::from_amplitudes(v.iter().copied().collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lcu_matches_direct_application(
        (n, h, psi) in (1usize..=4).prop_flat_map(|n| (Just(n), hermitian_sum(n, 6), state_strategy(n)))
    ) {
        let _ = n;
        let direct = h.apply(&psi).unwrap();
        let norm2 = direct.norm_sqr();
        prop_assume!(norm2 > 1e-10);
        let r = lcu_apply(&h, &psi, Mode::Exact, &mut RngStream::new(0)).unwrap();
        let want = direct.normalized().unwrap();
        let d = (vector(&r.state) - vector(&want)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(d < 1e-9, "state off by {d}");
        prop_assert!((r.success_probability - norm2 / (r.lambda * r.lambda)).abs() < 1e-9);
        prop_assert!((r.lambda - h.one_norm()).abs() < 1e-15);
    }

    #[test]
    fn preparation_matches_sine_of_operator(
        h in hermitian_sum(3, 5),
        psi in state_strategy(3),
        gamma in 0.05f64..1.5,
    ) {
        let m = dense_of(&h);
        let target = apply_function(&m, &vector(&psi), |x| (gamma * x).sin());
        let p = target.norm_squared();
        prop_assume!(p > 1e-8);
        let r = prepare_excited(&psi, &h, gamma, Mode::Exact, &mut RngStream::new(0)).unwrap();
        prop_assert!((r.success_probability - p).abs() < 1e-10);
        let want = state_of(&(target / c(p.sqrt())));
        prop_assert!((phase_overlap(&r.state, &want) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn small_angle_probability_is_quadratic(h in hermitian_sum(3, 5), psi in state_strategy(3)) {
        let m = dense_of(&h);
        let second = (m.clone() * &m * vector(&psi)).dotc(&vector(&psi)).re;
        prop_assume!(second > 1e-4);
        let gamma = 1e-3;
        let r = prepare_excited(&psi, &h, gamma, Mode::Exact, &mut RngStream::new(0)).unwrap();
        let ratio = r.success_probability / (gamma * gamma * second);
        prop_assert!((ratio - 1.0).abs() < 1e-4 * (1.0 + h.one_norm().powi(2)));
    }

    #[test]
    fn exact_swap_test_gives_squared_overlap(a in state_strategy(3), b in state_strategy(3)) {
        let want = a.inner(&b).unwrap().norm_sqr();
        let r = swap_test(&a, &b, Mode::Exact, &mut RngStream::new(0)).unwrap();
        prop_assert!((r.raw - want).abs() < 1e-12);
        prop_assert_eq!(r.standard_error, 0.0);
    }
}

fn fixed_pair() -> (StateVector, StateVector) {
    let a = StateVector::from_amplitudes(
        [(0.6, 0.1), (0.2, -0.3), (0.1, 0.4), (-0.5, 0.2)].iter().map(|&(r, i)| Complex64::new(r, i)).collect(),
    )
    .unwrap()
    .normalized()
    .unwrap();
    let b = StateVector::from_amplitudes(
        [(0.1, 0.0), (0.7, 0.2), (-0.3, 0.3), (0.2, -0.5)].iter().map(|&(r, i)| Complex64::new(r, i)).collect(),
    )
    .unwrap()
    .normalized()
    .unwrap();
    (a, b)
}

#[test]
fn sampled_swap_test_is_unbiased() {
    let (a, b) = fixed_pair();
    let want = a.inner(&b).unwrap().norm_sqr();
    let trials = 400;
    let shots = 1000;
    let mean: f64 = (0..trials)
        .map(|t| swap_test(&a, &b, Mode::sampled(shots), &mut RngStream::for_run(11, t)).unwrap().raw)
        .sum::<f64>()
        / trials as f64;
    let se = ((1.0 - want * want) / (shots * trials) as f64).sqrt();
    assert!((mean - want).abs() < 4.0 * se, "mean {mean} want {want} se {se}");
}

#[test]
fn sampled_frequencies_converge() {
    let (a, b) = fixed_pair();
    let s = a.tensor(&b).unwrap();
    let shots = 200_000u64;
    let hist = s.sample(&[0, 1, 2, 3], shots, &mut RngStream::new(5)).unwrap();
    for (i, amp) in s.amplitudes().iter().enumerate() {
        let p = amp.norm_sqr();
        let key: String = (0..4).rev().map(|q| if i >> q & 1 == 1 { '1' } else { '0' }).collect();
        let f = hist.frequency(&key);
        let sd = (p * (1.0 - p) / shots as f64).sqrt();
        assert!((f - p).abs() < 5.0 * sd + 1e-12, "{key}: {f} vs {p}");
    }
    let marg = s.marginal(&[2]).unwrap();
    let p1: f64 = s.amplitudes().iter().enumerate().filter(|(i, _)| i >> 2 & 1 == 1).map(|(_, a)| a.norm_sqr()).sum();
    assert!((marg[1] - p1).abs() < 1e-12);
}

#[test]
fn lcu_strength_equals_matrix_element() {
    let (a, b) = fixed_pair();
    let h = PauliSum::from_terms(
        2,
        vec![
            gdrq_core::PauliTerm::from_ops(2, 0.7, &[(0, gdrq_core::Pauli::X)]).unwrap(),
            gdrq_core::PauliTerm::from_ops(2, -0.4, &[(0, gdrq_core::Pauli::Z), (1, gdrq_core::Pauli::Y)]).unwrap(),
        ],
    )
    .unwrap();
    let want = h.apply(&a).unwrap().inner(&b).unwrap().norm_sqr();
    let got = transition_strength(&a, &h, &b, StatePrep::Lcu, Mode::Exact, &mut RngStream::new(0)).unwrap();
    assert!((got - want).abs() < 1e-12);
    let te = transition_strength(&a, &h, &b, StatePrep::TimeEvolution { gamma: 0.01 }, Mode::Exact, &mut RngStream::new(0))
        .unwrap();
    assert!((te - want).abs() < 1e-3 * (1.0 + want));
}

#[test]
fn empty_operator_annihilates() {
    let zero = StateVector::init_basis_state(2, "00").unwrap();
    let down = PauliSum::from_terms(2, vec![]).unwrap();
    assert!(matches!(
        lcu_apply(&down, &zero, Mode::Exact, &mut RngStream::new(0)),
        Err(Error::Annihilated { .. })
    ));
}
