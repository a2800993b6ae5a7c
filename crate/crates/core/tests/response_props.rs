use gdrq_core::encoding::{BasisWindow, EnergyGrid, NucleusConfig};
use gdrq_core::experiment::run_classical;
use gdrq_core::response::{
    bare_response, cross_section, peak_and_width, shape_frequencies, Transition, TransitionSet,
};
use proptest::prelude::*;

fn transition_set() -> impl Strategy<Value = TransitionSet> {
    prop::collection::vec((1.0f64..40.0, 0.0f64..50.0, 0.0f64..1.0, 0usize..3), 0..8).prop_map(|v| TransitionSet {
        transitions: v
            .into_iter()
            .map(|(energy, strength, weight, axis)| Transition { energy, strength, weight, axis })
            .collect(),
    })
}

fn tin(kappa: f64) -> NucleusConfig {
    let mut c = NucleusConfig::new(120, 50);
    c.kappa = kappa;
    c
}

proptest! {
    #[test]
    fn absorptive_sign(ts in transition_set(), gamma in 0.1f64..5.0) {
        let grid = EnergyGrid::default().points();
        let r0 = bare_response(&ts, &grid, gamma).unwrap();
        prop_assert!(r0.iter().flatten().all(|z| z.im <= 0.0));
        prop_assert!(cross_section(&grid, &r0).iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn response_is_linear_in_strength(ts in transition_set(), k in 0.1f64..10.0) {
        let grid = EnergyGrid::default().points();
        let mut scaled = ts.clone();
        for t in &mut scaled.transitions {
            t.strength *= k;
        }
        let a = bare_response(&ts, &grid, 1.0).unwrap();
        let b = bare_response(&scaled, &grid, 1.0).unwrap();
        for axis in 0..3 {
            for (x, y) in a[axis].iter().zip(&b[axis]) {
                prop_assert!((x * k - y).norm() <= 1e-12 * (1.0 + y.norm()));
            }
        }
    }

    #[test]
    fn single_pole_half_width_is_gamma(e in 10.0f64..25.0, gamma in 0.3f64..3.0) {
        let ts = TransitionSet { transitions: vec![Transition { energy: e, strength: 1.0, weight: 1.0, axis: 0 }] };
        let grid = EnergyGrid::new(0.0, 50.0, 0.001).unwrap().points();
        let r0 = bare_response(&ts, &grid, gamma).unwrap();
        let lorentz: Vec<f64> = r0[0].iter().map(|z| -z.im).collect();
        let (peak, fwhm) = peak_and_width(&grid, &lorentz).unwrap();
        prop_assert!((peak - e).abs() < 1e-3);
        prop_assert!((fwhm - 2.0 * gamma).abs() < 2e-3);
    }

    #[test]
    fn spherical_axes_agree(beta in -0.3f64..0.3) {
        let s = shape_frequencies(120, beta).unwrap();
        prop_assert_eq!(s.hbar_omega[0], s.hbar_omega[1]);
        let geo = (s.hbar_omega.iter().product::<f64>()).cbrt();
        prop_assert!((geo - gdrq_core::encoding::hbar_omega(120)).abs() < 1e-12);
        if beta.abs() < 1e-12 {
            prop_assert_eq!(s.hbar_omega[0], s.hbar_omega[2]);
        } else if beta > 0.0 {
            // prolate: long z axis, lower z frequency
            prop_assert!(s.hbar_omega[2] < s.hbar_omega[0]);
        } else {
            prop_assert!(s.hbar_omega[2] > s.hbar_omega[0]);
        }
    }
}

#[test]
fn spherical_spectrum_is_isotropic() {
    let s = run_classical(&tin(0.4)).unwrap();
    assert_eq!(s.r_dressed[0], s.r_dressed[1]);
    assert_eq!(s.r_dressed[0], s.r_dressed[2]);
}

#[test]
fn deformation_splits_the_resonance() {
    let mut c = tin(0.4);
    c.beta2 = 0.3;
    let s = run_classical(&c).unwrap();
    assert_eq!(s.r_dressed[0], s.r_dressed[1]);
    assert_ne!(s.r_dressed[0], s.r_dressed[2]);
}

#[test]
fn peak_rises_with_kappa() {
    let peaks: Vec<f64> = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
        .iter()
        .map(|&k| run_classical(&tin(k)).unwrap().peak_e0)
        .collect();
    assert!(peaks.windows(2).all(|p| p[1] > p[0]), "{peaks:?}");
}

#[test]
fn width_grows_with_gamma() {
    let widths: Vec<f64> = [0.5, 1.0, 2.0, 3.0]
        .iter()
        .map(|&g| {
            let mut c = tin(0.4);
            c.gamma_spread = g;
            run_classical(&c).unwrap().width_fwhm
        })
        .collect();
    assert!(widths.windows(2).all(|w| w[1] > w[0]), "{widths:?}");
}

#[test]
fn calibration_scales_sigma_only() {
    let a = run_classical(&tin(0.4)).unwrap();
    let mut c = tin(0.4);
    c.calibration = 2.5;
    let b = run_classical(&c).unwrap();
    assert_eq!(a.sigma_raw, b.sigma_raw);
    assert!((a.peak_e0 - b.peak_e0).abs() < 1e-12);
    for (x, y) in a.sigma.iter().zip(&b.sigma) {
        assert!((2.5 * x - y).abs() <= 1e-12 * y.abs());
    }
}

#[test]
fn windows_that_hold_the_fermi_shells_agree() {
    let full = run_classical(&{
        let mut c = tin(0.4);
        c.basis = BasisWindow::new(0, 10).unwrap();
        c
    })
    .unwrap();
    let narrow = run_classical(&tin(0.4)).unwrap();
    assert_eq!(full.peak_e0, narrow.peak_e0);
}
