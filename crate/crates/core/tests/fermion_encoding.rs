mod common;

use common::*;
use gdrq_core::encoding::{
    build_hamiltonian, jw_annihilation, jw_creation, reduced_dipole, shell_capacity, shell_dipole_factor,
    BasisWindow,
};
use gdrq_core::Pauli;
use proptest::prelude::*;

fn window() -> impl Strategy<Value = BasisWindow> {
    (0u32..8, 0u32..5).prop_map(|(lo, len)| BasisWindow::new(lo, lo + len).unwrap())
}

#[test]
fn annihilators_match_matrix_construction() {
    for n in 1..=5 {
        for j in 0..n {
            let a = dense_of(&jw_annihilation(j, n).unwrap());
            assert!(max_diff(&a, &fermion_annihilator(j, n)) < 1e-14, "mode {j} of {n}");
            let ad = dense_of(&jw_creation(j, n).unwrap());
            assert!(max_diff(&ad, &a.adjoint()) < 1e-14);
        }
    }
}

#[test]
fn canonical_anticommutation_on_six_modes() {
    let n = 6;
    let a: Vec<Dense> = (0..n).map(|j| dense_of(&jw_annihilation(j, n).unwrap())).collect();
    let id = Dense::identity(1 << n, 1 << n);
    let zero = Dense::zeros(1 << n, 1 << n);
    for i in 0..n {
        for j in 0..n {
            let adj = a[j].adjoint();
            let anti = &a[i] * &adj + &adj * &a[i];
            assert!(max_diff(&anti, if i == j { &id } else { &zero }) < 1e-12);
            assert!(max_diff(&(&a[i] * &a[j] + &a[j] * &a[i]), &zero) < 1e-12);
        }
        assert!(max_diff(&(&a[i] * &a[i]), &zero) < 1e-12);
    }
}

#[test]
fn shell_sequences() {
    let caps: Vec<u32> = (0..6).map(shell_capacity).collect();
    assert_eq!(caps, [2, 6, 12, 20, 30, 42]);
    // magic numbers 2, 8, 20, 40, 70, 112
    let magic: Vec<u32> = caps.iter().scan(0, |s, c| { *s += c; Some(*s) }).collect();
    assert_eq!(magic, [2, 8, 20, 40, 70, 112]);
    assert_eq!(shell_dipole_factor(0), 2.0);
    assert_eq!(shell_dipole_factor(3), 10.0);
}

proptest! {
    #[test]
    fn hamiltonian_is_diagonal_number_operator(w in window(), hw in 1.0f64..10.0) {
        let h = build_hamiltonian(w, hw).unwrap();
        prop_assert!(h.terms().iter().all(|t| t.axes().iter().all(|&p| p == Pauli::I || p == Pauli::Z)));
        let m = dense_of(&h);
        let n = w.nqubits();
        for i in 0..1usize << n {
            let e: f64 = (0..n)
                .filter(|q| i >> q & 1 == 1)
                .map(|q| (w.n_min() as f64 + q as f64 + 1.5) * hw)
                .sum();
            prop_assert!((m[(i, i)].re - e).abs() < 1e-11 * hw * 10.0);
        }
        let off: f64 = (0..1usize << n)
            .flat_map(|i| (0..1usize << n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| m[(i, j)].norm())
            .fold(0.0, f64::max);
        prop_assert!(off < 1e-14);
    }

    #[test]
    fn dipole_moves_one_particle_one_shell(w in window()) {
        let d = dense_of(&reduced_dipole(w).unwrap());
        prop_assert!(max_diff(&d, &d.adjoint()) < 1e-14);
        let n = w.nqubits();
        for i in 0..1usize << n {
            for j in 0..1usize << n {
                let v = d[(j, i)];
                let flip = i ^ j;
                let adjacent = flip.count_ones() == 2 && (flip >> flip.trailing_zeros()) == 0b11;
                let moves = adjacent && (i & flip).count_ones() == 1;
                if moves {
                    let lower = w.n_min() + flip.trailing_zeros();
                    let want = ((lower as f64 + 1.0) / 2.0).sqrt();
                    prop_assert!((v.norm() - want).abs() < 1e-12);
                } else {
                    prop_assert!(v.norm() < 1e-14);
                }
            }
        }
    }
}
