//! Entropies, mutual information, concurrence and quantum discord of a
//! two-dot density matrix.
//!
//! Each dot is a qubit with `|0⟩` empty and `|1⟩` occupied. Subsystem A is the
//! first mode of the register, B the second. Discord measures B with the
//! rank-one projectors `B_k = R Π_k R†`, where
//!
//! ```text
//! R = [ cos θ/2          sin θ/2 e^{−iφ} ]
//!     [ sin θ/2 e^{iφ}   −cos θ/2         ]
//! ```
//!
//! All entropies are in bits.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{partial_trace, DensityMatrix};
use crate::linalg::{self, CMatrix, ZERO};
use crate::optimize::AngleSearch;

/// Eigenvalues in `[−CLAMP, 0)` are rounded to zero before taking entropies.
const CLAMP: f64 = 1e-8;

/// Outcomes less likely than this do not contribute to conditional entropy.
const MIN_OUTCOME_PROBABILITY: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementAngles {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        use std::f64::consts::{PI, TAU};
        if !(0.0..=PI).contains(&theta) || !(0.0..=TAU).contains(&phi) {
            return Err(Error::InvalidParameter(format!(
                "measurement angles out of range: θ = {theta}, φ = {phi}"
            )));
        }
        Ok(Self { theta, phi })
    }

    /// Columns of `R`: the two measurement basis vectors.
    pub fn basis(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        [
            [Complex64::new(c, 0.0), Complex64::from_polar(s, self.phi)],
            [Complex64::from_polar(s, -self.phi), Complex64::new(-c, 0.0)],
        ]
    }

    /// The rotation `R` whose columns span the measurement basis.
    pub fn rotation(&self) -> CMatrix {
        let [r0, r1] = self.basis();
        CMatrix::from_row_slice(2, 2, &[r0[0], r1[0], r0[1], r1[1]])
    }

    /// Projector `B_k = R Π_k R†` for outcome `k ∈ {0, 1}`.
    pub fn projector(&self, k: usize) -> CMatrix {
        let col = self.rotation().column(k).into_owned();
        linalg::outer(&col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    pub discord: f64,
    pub mutual_information: f64,
    pub classical_correlations: f64,
    pub argmin_angles: MeasurementAngles,
}

/// A [`DiscordResult`] together with the optimizer bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordSearch {
    pub result: DiscordResult,
    /// Discord implied by the best coarse-lattice point alone.
    pub coarse_discord: f64,
    pub evaluations: usize,
}

fn shannon_bits(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    probabilities
        .into_iter()
        .map(|p| {
            let p = if (-CLAMP..0.0).contains(&p) { 0.0 } else { p.clamp(0.0, 1.0) };
            if p > 0.0 {
                -p * p.log2()
            } else {
                0.0
            }
        })
        .sum()
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_bits(rho.eigenvalues())
}

/// Entropy of a 2×2 Hermitian matrix with unit trace, via its closed-form
/// spectrum.
fn qubit_entropy(a: f64, d: f64, b: Complex64) -> f64 {
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    shannon_bits([mean + radius, mean - radius])
}

fn require_two_modes(rho: &DensityMatrix) -> Result<()> {
    let n = rho.register().mode_count();
    if n != 2 {
        return Err(Error::WrongRegisterSize { expected: 2, got: n });
    }
    Ok(())
}

fn subsystem_labels(rho: &DensityMatrix) -> (String, String) {
    let labels = rho.register().labels();
    (labels[0].clone(), labels[1].clone())
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    require_two_modes(rho_ab)?;
    let (a, b) = subsystem_labels(rho_ab);
    let s_a = von_neumann_entropy(&partial_trace(rho_ab, &[&a])?);
    let s_b = von_neumann_entropy(&partial_trace(rho_ab, &[&b])?);
    Ok(s_a + s_b - von_neumann_entropy(rho_ab))
}

pub fn spin_flip_operator() -> CMatrix {
    let sy = CMatrix::from_row_slice(
        2,
        2,
        &[ZERO, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), ZERO],
    );
    sy.kronecker(&sy)
}

/// The spin-flipped state `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
fn spin_flip(rho: &CMatrix) -> CMatrix {
    let yy = spin_flip_operator();
    &yy * rho.conjugate() * &yy
}

/// Wootters concurrence `max{0, Λ₁ − Λ₂ − Λ₃ − Λ₄}` where `Λ_i` are the
/// square roots, in decreasing order, of the eigenvalues of
/// `G = ρ (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
///
/// The `Λ_i` are taken as the singular values of `√ρ (σ_y ⊗ σ_y) √ρ*`, whose
/// squares are the eigenvalues of `G`. This avoids square roots of round-off
/// sized eigenvalues for rank-deficient states.
pub fn concurrence(rho_d: &DensityMatrix) -> Result<f64> {
    require_two_modes(rho_d)?;
    let root = linalg::psd_sqrt_with_floor(rho_d.elements(), linalg::ROUND_OFF_EIGENVALUE);
    let a = &root * spin_flip_operator() * root.conjugate();
    let l = linalg::singular_values(&a);
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// `G = ρ (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn wootters_matrix(rho_d: &DensityMatrix) -> Result<CMatrix> {
    require_two_modes(rho_d)?;
    let rho = rho_d.elements();
    Ok(rho * spin_flip(rho))
}

/// The unnormalized A-block `Tr_B[(I ⊗ |r⟩⟨r|) ρ (I ⊗ |r⟩⟨r|)] = ⟨r|_B ρ |r⟩_B`.
fn conditioned_block(rho: &CMatrix, r: [Complex64; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[ZERO; 2]; 2];
    for (a, row) in out.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            let mut acc = ZERO;
            for (b, rb) in r.iter().enumerate() {
                for (d, rd) in r.iter().enumerate() {
                    acc += rb.conj() * rho[(2 * a + b, 2 * c + d)] * rd;
                }
            }
            *entry = acc;
        }
    }
    out
}

fn conditional_entropy_unchecked(rho: &CMatrix, angles: &MeasurementAngles) -> f64 {
    angles
        .basis()
        .into_iter()
        .map(|r| {
            let block = conditioned_block(rho, r);
            let p = block[0][0].re + block[1][1].re;
            if p < MIN_OUTCOME_PROBABILITY {
                0.0
            } else {
                p * qubit_entropy(block[0][0].re / p, block[1][1].re / p, block[0][1] / p)
            }
        })
        .sum()
}

/// Post-measurement state `ρ_k = (I ⊗ B_k) ρ (I ⊗ B_k) / p_k` and its
/// probability `p_k`.
pub fn post_measurement_state(
    rho_ab: &DensityMatrix,
    angles: &MeasurementAngles,
    k: usize,
) -> Result<(f64, Option<DensityMatrix>)> {
    require_two_modes(rho_ab)?;
    let op = linalg::identity(2).kronecker(&angles.projector(k));
    let un = &op * rho_ab.elements() * &op;
    let p = linalg::trace(&un).re;
    if p < MIN_OUTCOME_PROBABILITY {
        return Ok((p, None));
    }
    let state = DensityMatrix::from_parts_unchecked(rho_ab.register().clone(), un.unscale(p));
    Ok((p, Some(state)))
}

/// `Σ_k p_k S(ρ_k)` after measuring subsystem B along `angles`.
pub fn conditional_entropy_after_measurement(rho_ab: &DensityMatrix, angles: &MeasurementAngles) -> Result<f64> {
    require_two_modes(rho_ab)?;
    Ok(conditional_entropy_unchecked(rho_ab.elements(), angles))
}

/// Discord with measurement on B, minimized with the default angle search.
pub fn quantum_discord(rho_ab: &DensityMatrix) -> Result<DiscordResult> {
    Ok(quantum_discord_with(rho_ab, &AngleSearch::default())?.result)
}

pub fn quantum_discord_with(rho_ab: &DensityMatrix, search: &AngleSearch) -> Result<DiscordSearch> {
    require_two_modes(rho_ab)?;
    let (a, _) = subsystem_labels(rho_ab);
    let s_a = von_neumann_entropy(&partial_trace(rho_ab, &[&a])?);
    let mi = mutual_information(rho_ab)?;
    let rho = rho_ab.elements();
    let found = search.minimize(|theta, phi| {
        conditional_entropy_unchecked(rho, &MeasurementAngles { theta, phi })
    });

    let mut classical = s_a - found.value;
    let mut discord = mi - classical;
    if (-CLAMP..0.0).contains(&discord) {
        discord = 0.0;
        classical = mi;
    }
    Ok(DiscordSearch {
        result: DiscordResult {
            discord,
            mutual_information: mi,
            classical_correlations: classical,
            argmin_angles: MeasurementAngles {
                theta: found.theta,
                phi: found.phi,
            },
        },
        coarse_discord: mi - (s_a - found.grid_value),
        evaluations: found.evaluations,
    })
}

/// Concurrence of an X-shaped state, `2 max{0, |ρ₀₃| − √(ρ₁₁ρ₂₂), |ρ₁₂| − √(ρ₀₀ρ₃₃)}`
/// in the `|00⟩, |01⟩, |10⟩, |11⟩` index order.
pub fn x_state_concurrence(rho: &CMatrix) -> f64 {
    let d = |i: usize| rho[(i, i)].re.max(0.0);
    let outer = rho[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    let inner = rho[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    2.0 * outer.max(inner).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ModeRegister, StateVector};
    use crate::linalg::{CVector, ONE};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn reg2() -> ModeRegister {
        ModeRegister::new(["D1", "D2"]).unwrap()
    }

    fn dm(elems: CMatrix) -> DensityMatrix {
        DensityMatrix::new(reg2(), elems).unwrap()
    }

    fn bell() -> DensityMatrix {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        StateVector::new(reg2(), CVector::from_vec(vec![s, ZERO, ZERO, s]))
            .unwrap()
            .density_matrix()
    }

    fn diag(p: [f64; 4]) -> DensityMatrix {
        dm(CMatrix::from_diagonal(&CVector::from_iterator(
            4,
            p.iter().map(|&x| Complex64::new(x, 0.0)),
        )))
    }

    fn qubit(p: f64, coh: Complex64) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[Complex64::new(1.0 - p, 0.0), coh, coh.conj(), Complex64::new(p, 0.0)])
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&bell()).abs() < 1e-12);
        assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(&reg2())) - 2.0).abs() < 1e-12);
        assert!((von_neumann_entropy(&diag([0.5, 0.5, 0.0, 0.0])) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_examples() {
        let prod = dm(qubit(0.3, Complex64::new(0.1, 0.2)).kronecker(&qubit(0.6, Complex64::new(-0.2, 0.1))));
        assert!(mutual_information(&prod).unwrap().abs() < 1e-12);
        assert!((mutual_information(&bell()).unwrap() - 2.0).abs() < 1e-12);
        assert!((mutual_information(&diag([0.5, 0.0, 0.0, 0.5])).unwrap() - 1.0).abs() < 1e-12);
        let three = DensityMatrix::maximally_mixed(&ModeRegister::new(["A", "B", "C"]).unwrap());
        assert_eq!(
            mutual_information(&three).unwrap_err(),
            Error::WrongRegisterSize { expected: 2, got: 3 }
        );
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let prod = dm(qubit(0.3, Complex64::new(0.1, 0.2)).kronecker(&qubit(0.6, Complex64::new(-0.2, 0.1))));
        assert!(concurrence(&prod).unwrap() < 1e-8);
        assert_eq!(concurrence(&DensityMatrix::maximally_mixed(&reg2())).unwrap(), 0.0);
    }

    #[test]
    fn conditional_entropy_examples() {
        let rho_a = qubit(0.3, Complex64::new(0.1, 0.2));
        let prod = dm(rho_a.kronecker(&qubit(0.6, Complex64::new(-0.2, 0.1))));
        let s_a = von_neumann_entropy(&DensityMatrix::new(ModeRegister::new(["D1"]).unwrap(), rho_a).unwrap());
        let classical = diag([0.5, 0.0, 0.0, 0.5]);
        for (t, p) in [(0.0, 0.0), (0.7, 2.0), (PI, 5.5), (PI / 2.0, 1.0)] {
            let angles = MeasurementAngles::new(t, p).unwrap();
            let h = conditional_entropy_after_measurement(&prod, &angles).unwrap();
            assert!((h - s_a).abs() < 1e-12);
            assert!(conditional_entropy_after_measurement(&bell(), &angles).unwrap().abs() < 1e-10);
        }
        let z = MeasurementAngles::new(0.0, 0.0).unwrap();
        assert!(conditional_entropy_after_measurement(&classical, &z).unwrap().abs() < 1e-12);
    }

    #[test]
    fn projectors_are_complete_and_orthogonal() {
        let a = MeasurementAngles::new(1.1, 4.0).unwrap();
        let p0 = a.projector(0);
        let p1 = a.projector(1);
        assert!(linalg::max_abs(&(&p0 + &p1 - linalg::identity(2))) < 1e-15);
        assert!(linalg::max_abs(&(&p0 * &p1)) < 1e-15);
        assert!(linalg::max_abs(&(&p0 * &p0 - &p0)) < 1e-15);
        assert!(MeasurementAngles::new(-0.1, 0.0).is_err());
        assert!(MeasurementAngles::new(0.0, 7.0).is_err());
    }

    #[test]
    fn closed_form_conditional_entropy_matches_full_post_measurement_states() {
        let rho = dm(CMatrix::from_row_slice(
            4,
            4,
            &[
                Complex64::new(0.3, 0.0), Complex64::new(0.05, 0.02), Complex64::new(0.0, 0.1), Complex64::new(0.1, -0.05),
                Complex64::new(0.05, -0.02), Complex64::new(0.2, 0.0), Complex64::new(0.03, 0.0), Complex64::new(0.0, 0.04),
                Complex64::new(0.0, -0.1), Complex64::new(0.03, 0.0), Complex64::new(0.25, 0.0), Complex64::new(0.02, 0.01),
                Complex64::new(0.1, 0.05), Complex64::new(0.0, -0.04), Complex64::new(0.02, -0.01), Complex64::new(0.25, 0.0),
            ],
        ));
        for (t, p) in [(0.3, 0.2), (1.9, 3.3), (2.8, 6.0)] {
            let angles = MeasurementAngles::new(t, p).unwrap();
            let mut full = 0.0;
            for k in 0..2 {
                let (p, state) = post_measurement_state(&rho, &angles, k).unwrap();
                if let Some(s) = state {
                    full += p * von_neumann_entropy(&s);
                }
            }
            let fast = conditional_entropy_after_measurement(&rho, &angles).unwrap();
            assert!((full - fast).abs() < 1e-10, "{full} vs {fast}");
        }
    }

    #[test]
    fn discord_examples() {
        let prod = dm(qubit(0.3, Complex64::new(0.1, 0.2)).kronecker(&qubit(0.6, Complex64::new(-0.2, 0.1))));
        assert!(quantum_discord(&prod).unwrap().discord.abs() < 1e-8);
        let b = quantum_discord(&bell()).unwrap();
        assert!((b.discord - 1.0).abs() < 1e-6);
        assert!((b.mutual_information - 2.0).abs() < 1e-10);
        // classically correlated states carry no discord
        assert!(quantum_discord(&diag([0.5, 0.0, 0.0, 0.5])).unwrap().discord.abs() < 1e-8);
    }

    #[test]
    fn x_state_concurrence_for_pure_single_excitation() {
        // a|10> + b|01>: concurrence 2|ab|
        let a = Complex64::new(0.6, 0.0);
        let b = Complex64::new(0.0, 0.8);
        let psi = StateVector::new(reg2(), CVector::from_vec(vec![ZERO, b, a, ZERO])).unwrap();
        let rho = psi.density_matrix();
        assert!((x_state_concurrence(rho.elements()) - 0.96).abs() < 1e-12);
        assert!((concurrence(&rho).unwrap() - 0.96).abs() < 1e-12);
    }

    fn local_phase(alpha: f64, beta: f64) -> CMatrix {
        let d = |x: f64| CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, Complex64::from_polar(1.0, x)]));
        d(alpha).kronecker(&d(beta))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn measures_invariant_under_local_phases(
            p in 0.0f64..1.0,
            q in 0.0f64..1.0,
            coh in 0.0f64..1.0,
            ph in 0.0f64..std::f64::consts::TAU,
            alpha in 0.0f64..std::f64::consts::TAU,
            beta in 0.0f64..std::f64::consts::TAU,
        ) {
            // X state: populations (|00>,|01>,|10>,|11>) and corner coherence
            let pops = [p * q, p * (1.0 - q), (1.0 - p) * q, (1.0 - p) * (1.0 - q)];
            let c = coh * (pops[0] * pops[3]).sqrt();
            let mut m = CMatrix::from_diagonal(&CVector::from_iterator(4, pops.iter().map(|&x| Complex64::new(x, 0.0))));
            m[(0, 3)] = Complex64::from_polar(c, ph);
            m[(3, 0)] = Complex64::from_polar(c, -ph);
            let rho = dm(m);
            let rotated = rho.transformed(&local_phase(alpha, beta)).unwrap();
            let d0 = quantum_discord(&rho).unwrap();
            let d1 = quantum_discord(&rotated).unwrap();
            prop_assert!((d0.discord - d1.discord).abs() < 1e-8);
            prop_assert!((concurrence(&rho).unwrap() - concurrence(&rotated).unwrap()).abs() < 1e-8);
            prop_assert!((d0.discord - (d0.mutual_information - d0.classical_correlations)).abs() < 1e-10);
            prop_assert!(d0.classical_correlations >= -1e-8);
            prop_assert!(d0.classical_correlations <= d0.mutual_information + 1e-8);
        }
    }
}
