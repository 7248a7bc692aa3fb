//! Occupation-probability tomography of the two-dot state.
//!
//! The two dots are tunnel-coupled to auxiliary dots DL and DR prepared in
//! `(|0⟩ + |1⟩)/√2`, the dot–Majorana couplings are switched off, and after
//! `Δt = π/(4T)` the joint occupations of D1 and D2 are read out. Together
//! with the directly measured populations this fixes the magnitude and
//! `cos Δφ` of the single coherence of the X-shaped two-dot state.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dynamics::{ClosedPropagator, OddParityAmplitudes};
use crate::error::{Error, Result};
use crate::fock::{self, partial_trace, DensityMatrix, StateVector};
use crate::linalg::{self, CMatrix, CVector};
use crate::models::{self, D1, D2, DL, DR};

/// Below this `b₁b₃` the coherence phase cannot be recovered.
pub const PHASE_RECOVERY_THRESHOLD: f64 = 1e-6;

const FORM_TOLERANCE: f64 = 1e-10;

/// Amplitudes of the auxiliary dots on `|n_L, n_R⟩ = |00⟩, |01⟩, |10⟩, |11⟩`:
/// `(|0⟩ + |1⟩)/√2` on DL and `(|0⟩ − |1⟩)/√2` on DR.
///
/// The relative sign is the phase convention of `d_R` under which the
/// readout formula holds for every `(b₁, b₂, b₃, Δφ)`. With both dots in
/// `(|0⟩ + |1⟩)/√2` the readout is instead
/// `16 P₁₁ = 9b₁² + 4b₂² + b₃² − 2b₁b₃ cos Δφ`; the two agree on all states
/// reached from `|0,0,1⟩`, where `b₁b₃ cos Δφ = −b₂²`.
pub const AUXILIARY_PREPARATION: [f64; 4] = [0.5, -0.5, 0.5, -0.5];
const COS_TOLERANCE: f64 = 1e-8;

/// Magnitudes and phases of the odd-parity state
/// `b₁e^{iφ₁}|1,1,1⟩ + b₂|1,0,0⟩ + b₂|0,1,0⟩ + b₃e^{iφ₃}|0,0,1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarDecomposition {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub phi1: f64,
    pub phi3: f64,
    /// `φ₁ − φ₃` reduced to `(−π, π]`.
    pub delta_phi: f64,
}

fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

impl PolarDecomposition {
    /// Builds a decomposition from magnitudes and a phase difference, putting
    /// the whole phase on `φ₁`.
    pub fn from_magnitudes(b1: f64, b2: f64, b3: f64, delta_phi: f64) -> Result<Self> {
        let norm = b1 * b1 + 2.0 * b2 * b2 + b3 * b3;
        if b1 < 0.0 || b2 < 0.0 || b3 < 0.0 || (norm - 1.0).abs() > FORM_TOLERANCE {
            return Err(Error::InvalidStateForm(format!(
                "need non-negative b with b1² + 2b2² + b3² = 1, got ({b1}, {b2}, {b3})"
            )));
        }
        let delta_phi = reduce_angle(delta_phi);
        Ok(Self {
            b1,
            b2,
            b3,
            phi1: delta_phi,
            phi3: 0.0,
            delta_phi,
        })
    }

    /// The two-dot reduced state, indexed `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn reduced_density_matrix(&self) -> CMatrix {
        x_state(self.b1, self.b2, self.b3, Complex64::from_polar(self.b1 * self.b3, self.delta_phi))
    }
}

fn x_state(b1: f64, b2: f64, b3: f64, coherence: Complex64) -> CMatrix {
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut m = linalg::zeros(4);
    m[(0, 0)] = re(b3 * b3);
    m[(1, 1)] = re(b2 * b2);
    m[(2, 2)] = re(b2 * b2);
    m[(1, 2)] = re(b2 * b2);
    m[(2, 1)] = re(b2 * b2);
    m[(3, 3)] = re(b1 * b1);
    m[(3, 0)] = coherence;
    m[(0, 3)] = coherence.conj();
    m
}

pub fn polar_decompose(c: &OddParityAmplitudes) -> Result<PolarDecomposition> {
    if (c.c2.norm() - c.c3.norm()).abs() > FORM_TOLERANCE {
        return Err(Error::InvalidStateForm(format!(
            "|C2| = {} differs from |C3| = {}",
            c.c2.norm(),
            c.c3.norm()
        )));
    }
    let phase = |z: Complex64| if z.norm() > 0.0 { z.arg() } else { 0.0 };
    let phi1 = phase(c.c1);
    let phi3 = phase(c.c4);
    Ok(PolarDecomposition {
        b1: c.c1.norm(),
        b2: c.c2.norm(),
        b3: c.c4.norm(),
        phi1,
        phi3,
        delta_phi: reduce_angle(phi1 - phi3),
    })
}

/// Joint occupation probabilities of D1 and D2 (`p10`: only D1 occupied).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointProbabilities {
    pub p11: f64,
    pub p10: f64,
    pub p01: f64,
    pub p00: f64,
}

impl JointProbabilities {
    pub fn sum(&self) -> f64 {
        self.p11 + self.p10 + self.p01 + self.p00
    }

    pub fn max_abs_diff(&self, other: &JointProbabilities) -> f64 {
        [
            self.p11 - other.p11,
            self.p10 - other.p10,
            self.p01 - other.p01,
            self.p00 - other.p00,
        ]
        .iter()
        .fold(0.0f64, |acc, d| acc.max(d.abs()))
    }
}

/// Readout probabilities after the `π/(4T)` mixing step, in closed form.
pub fn closed_form_probabilities(pd: &PolarDecomposition) -> JointProbabilities {
    let b1 = pd.b1 * pd.b1;
    let b2 = pd.b2 * pd.b2;
    let b3 = pd.b3 * pd.b3;
    let coherence = 2.0 * pd.b1 * pd.b3 * pd.delta_phi.cos();
    let single = (3.0 * b1 + 8.0 * b2 + 3.0 * b3 - coherence) / 16.0;
    JointProbabilities {
        p11: (9.0 * b1 + 8.0 * b2 + b3 + coherence) / 16.0,
        p10: single,
        p01: single,
        p00: (b1 + 8.0 * b2 + 9.0 * b3 + coherence) / 16.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseRecovery {
    /// `cos Δφ` was recovered; the reconstruction uses `Δφ = arccos(cos Δφ) ∈ [0, π]`.
    Recovered { cos_delta_phi: f64 },
    /// `b₁b₃` too small; only populations are reconstructed.
    Unrecoverable,
}

impl PhaseRecovery {
    pub fn is_recovered(&self) -> bool {
        matches!(self, Self::Recovered { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub density: DensityMatrix,
    pub phase: PhaseRecovery,
}

fn two_dot_register() -> fock::ModeRegister {
    fock::ModeRegister::new([D1, D2]).expect("static register")
}

/// Inverts the readout probabilities for `cos Δφ` and assembles the X-shaped
/// two-dot state. `sin Δφ` is taken non-negative.
pub fn reconstruct_density_matrix(probs: &JointProbabilities, populations: (f64, f64, f64)) -> Result<Reconstruction> {
    let (b1, b2, b3) = populations;
    let norm = b1 * b1 + 2.0 * b2 * b2 + b3 * b3;
    if b1 < 0.0 || b2 < 0.0 || b3 < 0.0 || (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidStateForm(format!(
            "populations ({b1}, {b2}, {b3}) do not describe a normalized state"
        )));
    }
    let (coherence, phase) = if b1 * b3 < PHASE_RECOVERY_THRESHOLD {
        (Complex64::new(0.0, 0.0), PhaseRecovery::Unrecoverable)
    } else {
        let cos = (16.0 * probs.p11 - 9.0 * b1 * b1 - 8.0 * b2 * b2 - b3 * b3) / (2.0 * b1 * b3);
        if cos.abs() > 1.0 + COS_TOLERANCE || !cos.is_finite() {
            return Err(Error::InconsistentProbabilities(cos));
        }
        let cos = cos.clamp(-1.0, 1.0);
        (
            Complex64::from_polar(b1 * b3, cos.acos()),
            PhaseRecovery::Recovered { cos_delta_phi: cos },
        )
    };
    let density = DensityMatrix::from_parts_unchecked(two_dot_register(), x_state(b1, b2, b3, coherence));
    Ok(Reconstruction { density, phase })
}

/// Uhlmann fidelity between a reconstruction and the true two-dot state,
/// maximized over the two branches of `sin Δφ`.
///
/// Both branches are related by the local phase rotation
/// `exp(−iΔφ(n̂₁ + n̂₂))`, which for these X-shaped states is the same as
/// complex conjugation.
pub fn reconstruction_fidelity(reconstructed: &DensityMatrix, reference: &DensityMatrix) -> f64 {
    let direct = linalg::fidelity(reconstructed.elements(), reference.elements());
    let mirrored = linalg::fidelity(&reconstructed.elements().conjugate(), reference.elements());
    direct.max(mirrored)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyRecord {
    pub probabilities: JointProbabilities,
    pub reconstructed: DensityMatrix,
    /// Direct partial trace of the probed state.
    pub reference: DensityMatrix,
    pub phase: PhaseRecovery,
}

impl TomographyRecord {
    pub fn p11(&self) -> f64 {
        self.probabilities.p11
    }

    pub fn p10(&self) -> f64 {
        self.probabilities.p10
    }

    pub fn p01(&self) -> f64 {
        self.probabilities.p01
    }

    pub fn p00(&self) -> f64 {
        self.probabilities.p00
    }

    pub fn fidelity(&self) -> f64 {
        reconstruction_fidelity(&self.reconstructed, &self.reference)
    }
}

/// Checks that `psi` is an odd-parity `(D1, D2, F)` state with `C₂ = C₃`.
fn validate_protocol_input(psi: &StateVector) -> Result<OddParityAmplitudes> {
    let amps = OddParityAmplitudes::from_state(psi)
        .map_err(|e| Error::InvalidStateForm(e.to_string()))?;
    let even = OddParityAmplitudes::even_weight(psi);
    if even > FORM_TOLERANCE {
        return Err(Error::InvalidStateForm(format!("even-parity weight {even:e}")));
    }
    if (amps.c2 - amps.c3).norm() > 1e-8 {
        return Err(Error::InvalidStateForm(format!(
            "single-occupation amplitudes differ: {} vs {}",
            amps.c2, amps.c3
        )));
    }
    Ok(amps)
}

/// Runs the auxiliary-dot readout on `psi_t` with tunnel coupling `tunnel`.
pub fn simulate_protocol(psi_t: &StateVector, tunnel: f64) -> Result<TomographyRecord> {
    let h = models::build_tomography_hamiltonian(tunnel)?;
    validate_protocol_input(psi_t)?;

    let aux = StateVector::new(
        fock::ModeRegister::new([DL, DR])?,
        CVector::from_iterator(4, AUXILIARY_PREPARATION.iter().map(|&a| Complex64::new(a, 0.0))),
    )?;
    let initial = aux.tensor(psi_t)?;
    if initial.register() != h.register() {
        return Err(Error::RegisterMismatch("auxiliary embedding".into()));
    }

    let evolved = ClosedPropagator::new(&h).propagate(&initial, PI / (4.0 * tunnel))?;
    let reg = evolved.register();
    let n1 = fock::number_operator(reg, D1)?;
    let n2 = fock::number_operator(reg, D2)?;
    let id = linalg::identity(reg.dimension());
    let e1 = &id - &n1;
    let e2 = &id - &n2;
    let prob = |op: CMatrix| -> Result<f64> { Ok(evolved.expectation(&op)?.re) };
    let probabilities = JointProbabilities {
        p11: prob(&n1 * &n2)?,
        p10: prob(&n1 * &e2)?,
        p01: prob(&e1 * &n2)?,
        p00: prob(&e1 * &e2)?,
    };

    let reference = partial_trace(&psi_t.density_matrix(), &[D1, D2])?;
    // the populations are what a direct joint occupation measurement would give
    let pop = |o: [u8; 2]| reference.population(&o).map(|p| p.max(0.0));
    let b1 = pop([1, 1])?.sqrt();
    let b2 = (0.5 * (pop([1, 0])? + pop([0, 1])?)).sqrt();
    let b3 = pop([0, 0])?.sqrt();
    let rec = reconstruct_density_matrix(&probabilities, (b1, b2, b3))?;

    Ok(TomographyRecord {
        probabilities,
        reconstructed: rec.density,
        reference,
        phase: rec.phase,
    })
}
