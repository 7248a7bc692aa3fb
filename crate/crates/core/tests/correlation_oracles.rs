//! Correlation measures against closed forms for Werner and classical-quantum
//! states, plus invariants on random two-mode states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use qdmf_core::correlations::{concurrence, mutual_information, quantum_discord};
use qdmf_core::fock::{DensityMatrix, ModeRegister};
use qdmf_core::linalg::CMatrix;

fn register() -> ModeRegister {
    ModeRegister::new(["A", "B"]).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn werner(p: f64) -> DensityMatrix {
    let mut m = CMatrix::identity(4, 4) * c((1.0 - p) / 4.0, 0.0);
    let h = p / 2.0;
    m[(1, 1)] += h;
    m[(2, 2)] += h;
    m[(1, 2)] -= h;
    m[(2, 1)] -= h;
    DensityMatrix::new(register(), m).unwrap()
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

fn werner_discord(p: f64) -> f64 {
    xlogx(1.0 - p) / 4.0 - xlogx(1.0 + p) / 2.0 + xlogx(1.0 + 3.0 * p) / 4.0
}

#[test]
fn werner_family_matches_closed_forms() {
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let rho = werner(p);
        let conc = concurrence(&rho).unwrap();
        assert!((conc - ((3.0 * p - 1.0) / 2.0).max(0.0)).abs() < 1e-10, "p={p} C={conc}");
        let d = quantum_discord(&rho).unwrap();
        assert!((d.discord - werner_discord(p)).abs() < 1e-9, "p={p} D={}", d.discord);
    }
}

fn qubit(m: [[Complex64; 2]; 2]) -> CMatrix {
    DMatrix::from_fn(2, 2, |i, j| m[i][j])
}

#[test]
fn classical_on_measured_side_has_no_discord() {
    let zero = qubit([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
    let one = qubit([[c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
    let plus = qubit([[c(0.5, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), c(0.5, 0.0)]]);
    let m = (zero.kronecker(&zero) * c(0.3, 0.0)) + (plus.kronecker(&one) * c(0.7, 0.0));
    let rho = DensityMatrix::new(register(), m).unwrap();
    let d = quantum_discord(&rho).unwrap();
    assert!(d.discord.abs() < 1e-10, "D={}", d.discord);
    assert!(d.mutual_information > 0.1);
    assert!(concurrence(&rho).unwrap() < 1e-10);
}

fn random_state(entries: &[f64]) -> DensityMatrix {
    let g = DMatrix::from_fn(4, 4, |i, j| c(entries[2 * (4 * i + j)], entries[2 * (4 * i + j) + 1]));
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(register(), m / tr).unwrap()
}

fn unitary(a: f64, b: f64, g: f64) -> CMatrix {
    let (s, co) = (a / 2.0).sin_cos();
    qubit([
        [c(co, 0.0) * Complex64::from_polar(1.0, b), c(s, 0.0) * Complex64::from_polar(1.0, g)],
        [-c(s, 0.0) * Complex64::from_polar(1.0, -g), c(co, 0.0) * Complex64::from_polar(1.0, -b)],
    ])
}

fn entries() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 32).prop_filter("full rank enough", |v| v.iter().any(|x| x.abs() > 0.1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn measures_are_ordered_and_bounded(e in entries()) {
        let rho = random_state(&e);
        let conc = concurrence(&rho).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&conc));
        let d = quantum_discord(&rho).unwrap();
        let mi = mutual_information(&rho).unwrap();
        prop_assert!((d.mutual_information - mi).abs() < 1e-12);
        prop_assert!(d.classical_correlations >= -1e-10);
        prop_assert!(d.classical_correlations <= mi + 1e-10);
        prop_assert!(d.discord >= 0.0 && d.discord <= mi + 1e-10);
        prop_assert!(mi <= 2.0 + 1e-10);
    }

    #[test]
    fn local_unitaries_leave_measures_unchanged(
        e in entries(),
        ua in (0.0f64..3.2, -3.2f64..3.2, -3.2f64..3.2),
        ub in (0.0f64..3.2, -3.2f64..3.2, -3.2f64..3.2),
    ) {
        let rho = random_state(&e);
        let u = unitary(ua.0, ua.1, ua.2).kronecker(&unitary(ub.0, ub.1, ub.2));
        let rotated = DensityMatrix::new(register(), &u * rho.elements() * u.adjoint()).unwrap();
        let (d0, d1) = (quantum_discord(&rho).unwrap(), quantum_discord(&rotated).unwrap());
        prop_assert!((d0.discord - d1.discord).abs() < 1e-8, "{} vs {}", d0.discord, d1.discord);
        prop_assert!((d0.mutual_information - d1.mutual_information).abs() < 1e-10);
        let (c0, c1) = (concurrence(&rho).unwrap(), concurrence(&rotated).unwrap());
        prop_assert!((c0 - c1).abs() < 1e-9);
    }
}
