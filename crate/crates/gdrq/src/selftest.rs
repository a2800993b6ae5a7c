//! Fast invariant checks behind `gdrq selftest`.

use std::io::Write;

use gdrq_core::algorithms::{lcu_apply, swap_test, Mode};
use gdrq_core::encoding::{build_hamiltonian, jw_annihilation, jw_creation, BasisWindow};
use gdrq_core::{CMatrix, Complex64, Pauli, PauliSum, PauliTerm, RngStream, StateVector};

use crate::error::CliError;

/// Reference values the checks compare against. Tests swap in corrupted
/// copies to make sure a bad constant is caught.
#[derive(Debug, Clone, PartialEq)]
pub struct Goldens {
    /// Window 0-3 in units of ħω: identity, then Z0..Z3.
    pub h4: Vec<f64>,
    /// Window 0-4 in units of ħω: identity, then Z0..Z4.
    pub h5: Vec<f64>,
    pub jw_modes: usize,
    pub jw_tolerance: f64,
    pub lcu_tolerance: f64,
}

impl Default for Goldens {
    fn default() -> Self {
        Goldens {
            h4: vec![6.0, -0.75, -1.25, -1.75, -2.25],
            h5: vec![8.75, -0.75, -1.25, -1.75, -2.25, -2.75],
            jw_modes: 5,
            jw_tolerance: 1e-12,
            lcu_tolerance: 1e-12,
        }
    }
}

type Check = fn(&Goldens, &mut dyn Write) -> Result<(), String>;

const CHECKS: [(&str, Check); 5] = [
    ("jw-algebra", jw_algebra),
    ("h4-golden", h4_golden),
    ("h5-golden", h5_golden),
    ("swap-identity", swap_identity),
    ("lcu-eigenstate", lcu_eigenstate),
];

fn core_err(e: gdrq_core::Error) -> String {
    e.to_string()
}

fn jw_algebra(g: &Goldens, _: &mut dyn Write) -> Result<(), String> {
    let n = g.jw_modes;
    let dense = |p: PauliSum| p.dense_matrix().map_err(core_err);
    let a: Vec<CMatrix> = (0..n)
        .map(|j| jw_annihilation(j, n).map_err(core_err).and_then(dense))
        .collect::<Result<_, _>>()?;
    let ad: Vec<CMatrix> = (0..n)
        .map(|j| jw_creation(j, n).map_err(core_err).and_then(dense))
        .collect::<Result<_, _>>()?;
    let dim = 1 << n;
    let id = CMatrix::identity(dim);
    let zero = CMatrix::zeros(dim);
    let anti = |x: &CMatrix, y: &CMatrix| -> Result<CMatrix, String> {
        x.matmul(y)
            .and_then(|xy| y.matmul(x).and_then(|yx| xy.add(&yx)))
            .map_err(core_err)
    };
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { &id } else { &zero };
            let d = anti(&a[i], &ad[j])?.max_abs_diff(want);
            if d > g.jw_tolerance {
                return Err(format!("{{a{i}, a{j}†}} off by {d:e}"));
            }
            let d = anti(&a[i], &a[j])?.max_abs_diff(&zero);
            if d > g.jw_tolerance {
                return Err(format!("{{a{i}, a{j}}} off by {d:e}"));
            }
        }
        let d = a[i].matmul(&a[i]).map_err(core_err)?.max_abs_diff(&zero);
        if d > g.jw_tolerance {
            return Err(format!("a{i}² off by {d:e}"));
        }
    }
    Ok(())
}

fn golden_window(n_max: u32, want: &[f64], out: &mut dyn Write) -> Result<(), String> {
    let w = BasisWindow::new(0, n_max).map_err(core_err)?;
    let h = build_hamiltonian(w, 1.0).map_err(core_err)?;
    let n = w.nqubits();
    if want.len() != n + 1 {
        return Err(format!("expected {} golden coefficients, have {}", n + 1, want.len()));
    }
    let mut axes = vec![Pauli::I; n];
    let mut got = vec![h.coefficient(&axes)];
    for q in 0..n {
        axes[q] = Pauli::Z;
        got.push(h.coefficient(&axes));
        axes[q] = Pauli::I;
    }
    for (k, (c, &w)) in got.iter().zip(want).enumerate() {
        if c.re != w || c.im != 0.0 {
            let label = if k == 0 { "I".to_string() } else { format!("Z{}", k - 1) };
            return Err(format!("coefficient of {label} is {c}, expected {w}"));
        }
    }
    if h.terms().len() != n + 1 {
        return Err(format!("{} terms, expected {}", h.terms().len(), n + 1));
    }
    writeln!(out, "  ({})·ħω", h.compact(1.0)).map_err(|e| e.to_string())
}

fn h4_golden(g: &Goldens, out: &mut dyn Write) -> Result<(), String> {
    golden_window(3, &g.h4, out)
}

fn h5_golden(g: &Goldens, out: &mut dyn Write) -> Result<(), String> {
    golden_window(4, &g.h5, out)
}

fn swap_identity(_: &Goldens, _: &mut dyn Write) -> Result<(), String> {
    let amps: Vec<Complex64> = [(0.5, 0.1), (-0.2, 0.4), (0.3, -0.3), (0.1, 0.6)]
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect();
    let psi = StateVector::from_amplitudes(amps)
        .and_then(|s| s.normalized())
        .map_err(core_err)?;
    let mut rng = RngStream::new(0);
    let exact = swap_test(&psi, &psi, Mode::Exact, &mut rng).map_err(core_err)?;
    if (exact.raw - 1.0).abs() > 1e-12 {
        return Err(format!("exact overlap {} for identical states", exact.raw));
    }
    let sampled = swap_test(&psi, &psi, Mode::sampled(1000), &mut rng).map_err(core_err)?;
    if sampled.raw != 1.0 {
        return Err(format!("sampled overlap {} for identical states", sampled.raw));
    }
    Ok(())
}

fn lcu_eigenstate(g: &Goldens, _: &mut dyn Write) -> Result<(), String> {
    let h = build_hamiltonian(BasisWindow::new(0, 3).map_err(core_err)?, 1.0).map_err(core_err)?;
    let psi = StateVector::init_basis_state(4, "0101").map_err(core_err)?;
    let energy = h.apply(&psi).and_then(|v| v.inner(&psi)).map_err(core_err)?.re;
    let r = lcu_apply(&h, &psi, Mode::Exact, &mut RngStream::new(0)).map_err(core_err)?;
    let fidelity = r.state.inner(&psi).map_err(core_err)?.norm_sqr();
    if (fidelity - 1.0).abs() > g.lcu_tolerance {
        return Err(format!("eigenstate fidelity {fidelity}"));
    }
    let want = (energy / r.lambda).powi(2);
    if (r.success_probability - want).abs() > g.lcu_tolerance {
        return Err(format!("success probability {} expected {want}", r.success_probability));
    }
    let single = PauliSum::from_terms(4, vec![PauliTerm::from_ops(4, 2.0, &[(2, Pauli::Z)]).map_err(core_err)?])
        .map_err(core_err)?;
    let r = lcu_apply(&single, &psi, Mode::Exact, &mut RngStream::new(0)).map_err(core_err)?;
    if (r.success_probability - 1.0).abs() > g.lcu_tolerance {
        return Err(format!("single-term success probability {}", r.success_probability));
    }
    Ok(())
}

/// Runs every check, printing one line each. The first failure is returned
/// with its name.
pub fn run_checks(goldens: &Goldens, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::SelfTest(format!("output: {e}"));
    for (name, check) in CHECKS {
        let mut detail = Vec::new();
        let result = check(goldens, &mut detail);
        match result {
            Ok(()) => {
                writeln!(out, "ok   {name}").map_err(io)?;
                out.write_all(&detail).map_err(io)?;
            }
            Err(msg) => {
                writeln!(out, "FAIL {name}: {msg}").map_err(io)?;
                return Err(CliError::SelfTest(format!("{name}: {msg}")));
            }
        }
    }
    writeln!(out, "all checks passed").map_err(io)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_goldens_pass() {
        let mut out = Vec::new();
        run_checks(&Goldens::default(), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("(6I-0.75Z0-1.25Z1-1.75Z2-2.25Z3)·ħω"), "{text}");
        assert!(text.ends_with("all checks passed\n"));
    }

    #[test]
    fn corrupted_h5_is_named() {
        let mut g = Goldens::default();
        g.h5[5] = -2.5;
        let mut out = Vec::new();
        let err = run_checks(&g, &mut out).unwrap_err();
        assert!(err.to_string().contains("h5-golden"), "{err}");
        assert!(!String::from_utf8(out).unwrap().contains("all checks passed"));
    }
}
