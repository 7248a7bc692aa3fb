//! Closed and open evolution.
//!
//! Closed evolution diagonalizes the Hamiltonian once and applies
//! `exp(−iHt)` exactly. Open evolution integrates
//! `ρ̇ = −i[H, ρ] + Σ_k (A_k ρ A_k† − ½{A_k†A_k, ρ})` with fixed-step RK4.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, StateVector};
use crate::linalg::{self, CMatrix, CVector};
use crate::models::{self, Hamiltonian};

/// Default RK4 substep, in units of 1/λ.
pub const DEFAULT_DT: f64 = 1e-3;

/// Largest allowed |Tr ρ − 1| at a sample.
pub const TRACE_TOLERANCE: f64 = 1e-8;

/// Most negative eigenvalue tolerated at a sample before the integration is
/// declared failed.
pub const POSITIVITY_FLOOR: f64 = -1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_points: usize,
    dt_internal: f64,
}

impl TimeGrid {
    /// Uniform grid with the default substep, shrunk to the grid spacing when
    /// the grid is finer than that.
    pub fn new(t_start: f64, t_end: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n_points}")));
        }
        let spacing = (t_end - t_start) / (n_points - 1) as f64;
        Self::with_dt(t_start, t_end, n_points, DEFAULT_DT.min(spacing))
    }

    pub fn with_dt(t_start: f64, t_end: f64, n_points: usize, dt_internal: f64) -> Result<Self> {
        if !t_start.is_finite() || !t_end.is_finite() || t_end <= t_start {
            return Err(Error::InvalidGrid(format!(
                "need t_end > t_start, got [{t_start}, {t_end}]"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n_points}")));
        }
        let spacing = (t_end - t_start) / (n_points - 1) as f64;
        if dt_internal.is_nan() || dt_internal <= 0.0 || dt_internal > spacing * (1.0 + 1e-12) {
            return Err(Error::InvalidGrid(format!(
                "dt_internal must lie in (0, {spacing}], got {dt_internal}"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            n_points,
            dt_internal,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dt_internal(&self) -> f64 {
        self.dt_internal
    }

    pub fn spacing(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_points - 1) as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t_start + (self.t_end - self.t_start) * k as f64 / (self.n_points - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.time(k)).collect()
    }

    /// Same span and points with a different substep.
    pub fn refined(&self, dt_internal: f64) -> Result<Self> {
        Self::with_dt(self.t_start, self.t_end, self.n_points, dt_internal)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S> Trajectory<S> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// Amplitudes on the odd-parity kets `|1,1,1⟩, |1,0,0⟩, |0,1,0⟩, |0,0,1⟩`
/// of the `(D1, D2, F)` register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddParityAmplitudes {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
    pub c4: Complex64,
}

const ODD_KETS: [[u8; 3]; 4] = [[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]];

impl OddParityAmplitudes {
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|c| c.norm_sqr()).sum()
    }

    /// Projection of a `(D1, D2, F)` state onto the odd-parity kets.
    pub fn from_state(psi: &StateVector) -> Result<Self> {
        let expected = models::qd_mf_register();
        if psi.register() != &expected {
            return Err(Error::RegisterMismatch(format!(
                "expected register {:?}, got {:?}",
                expected.labels(),
                psi.register().labels()
            )));
        }
        let c: Vec<Complex64> = ODD_KETS
            .iter()
            .map(|o| psi.amplitude(o))
            .collect::<Result<_>>()?;
        Ok(Self {
            c1: c[0],
            c2: c[1],
            c3: c[2],
            c4: c[3],
        })
    }

    /// Weight of a `(D1, D2, F)` state outside the odd-parity sector.
    pub fn even_weight(psi: &StateVector) -> f64 {
        psi.amplitudes()
            .iter()
            .enumerate()
            .filter(|(s, _)| s.count_ones() % 2 == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn to_state(&self) -> Result<StateVector> {
        let register = models::qd_mf_register();
        let mut amps = CVector::zeros(register.dimension());
        for (o, c) in ODD_KETS.iter().zip(self.as_array()) {
            amps[register.index_of(o)?] = c;
        }
        StateVector::new(register, amps)
    }
}

/// Closed-form odd-parity amplitudes at the symmetric resonant point
/// (`ε₁ = ε₂ = 0`, `λ₁ = λ₂ = λ`) starting from `|0,0,1⟩`.
pub fn analytic_odd_parity_coefficients(epsilon_m: f64, lambda: f64, t: f64) -> Result<OddParityAmplitudes> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive for the closed form, got {lambda}"
        )));
    }
    let delta = (epsilon_m * epsilon_m + 16.0 * lambda * lambda).sqrt() / 2.0;
    let omega = epsilon_m / 2.0;
    let slow = Complex64::from_polar(delta, -omega * t);
    let (s, c) = (delta * t).sin_cos();
    let common = Complex64::new(delta * c, -omega * s);
    let c1 = (common - slow) / (2.0 * delta);
    let c4 = (common + slow) / (2.0 * delta);
    let c2 = Complex64::new(0.0, -lambda * s / delta);
    Ok(OddParityAmplitudes { c1, c2, c3: c2, c4 })
}

/// `exp(−iHt)` through a cached eigen-decomposition of `H`.
#[derive(Debug, Clone)]
pub struct ClosedPropagator {
    register: crate::fock::ModeRegister,
    energies: Vec<f64>,
    vectors: CMatrix,
}

impl ClosedPropagator {
    pub fn new(h: &Hamiltonian) -> Self {
        let (energies, vectors) = linalg::hermitian_eigen(h.matrix());
        Self {
            register: h.register().clone(),
            energies,
            vectors,
        }
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn propagate(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.register() != &self.register {
            return Err(Error::DimensionMismatch {
                expected: self.register.dimension(),
                got: psi.amplitudes().len(),
            });
        }
        let mut coeffs = self.vectors.adjoint() * psi.amplitudes();
        for (c, &e) in coeffs.iter_mut().zip(&self.energies) {
            *c *= Complex64::from_polar(1.0, -e * t);
        }
        Ok(StateVector::from_parts_unchecked(
            self.register.clone(),
            &self.vectors * coeffs,
        ))
    }

    /// The unitary `exp(−iHt)` itself.
    pub fn unitary(&self, t: f64) -> CMatrix {
        let phases = CVector::from_iterator(
            self.energies.len(),
            self.energies.iter().map(|&e| Complex64::from_polar(1.0, -e * t)),
        );
        &self.vectors * CMatrix::from_diagonal(&phases) * self.vectors.adjoint()
    }
}

/// Samples `exp(−iH(t − t_start)) ψ₀` on the grid.
pub fn evolve_closed(h: &Hamiltonian, psi0: &StateVector, grid: &TimeGrid) -> Result<Trajectory<StateVector>> {
    if psi0.register() != h.register() {
        return Err(Error::DimensionMismatch {
            expected: h.register().dimension(),
            got: psi0.amplitudes().len(),
        });
    }
    let prop = ClosedPropagator::new(h);
    let times = grid.times();
    let states = times
        .iter()
        .map(|&t| prop.propagate(psi0, t - grid.t_start()))
        .collect::<Result<_>>()?;
    Ok(Trajectory { times, states })
}

/// Right-hand side of the master equation, with the anti-commutator folded
/// into the non-Hermitian `H_eff = H − (i/2) Σ A†A`.
struct Liouvillian {
    h_eff: CMatrix,
    h_eff_dag: CMatrix,
    jumps: Vec<(CMatrix, CMatrix)>,
}

impl Liouvillian {
    fn new(h: &CMatrix, jumps: &[CMatrix]) -> Self {
        let dim = h.nrows();
        let decay = jumps
            .iter()
            .fold(linalg::zeros(dim), |acc, a| acc + a.adjoint() * a);
        let h_eff = h - decay * Complex64::new(0.0, 0.5);
        Self {
            h_eff_dag: h_eff.adjoint(),
            h_eff,
            jumps: jumps.iter().map(|a| (a.clone(), a.adjoint())).collect(),
        }
    }

    fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = (&self.h_eff * rho - rho * &self.h_eff_dag) * Complex64::new(0.0, -1.0);
        for (a, a_dag) in &self.jumps {
            out += a * rho * a_dag;
        }
        out
    }

    fn rk4_step(&self, rho: &CMatrix, h: f64) -> CMatrix {
        let half = Complex64::new(h / 2.0, 0.0);
        let full = Complex64::new(h, 0.0);
        let k1 = self.apply(rho);
        let k2 = self.apply(&(rho + &k1 * half));
        let k3 = self.apply(&(rho + &k2 * half));
        let k4 = self.apply(&(rho + &k3 * full));
        rho + (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * Complex64::new(h / 6.0, 0.0)
    }
}

/// Integrates the Lindblad equation with fixed-step RK4 at the grid's
/// `dt_internal`, sampling on the grid.
///
/// Each grid interval is split into the smallest whole number of substeps not
/// exceeding `dt_internal`, so samples land exactly on grid times.
pub fn evolve_lindblad(
    h: &Hamiltonian,
    jumps: &[CMatrix],
    rho0: &DensityMatrix,
    grid: &TimeGrid,
) -> Result<Trajectory<DensityMatrix>> {
    let dim = h.register().dimension();
    if rho0.register() != h.register() {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: rho0.dimension(),
        });
    }
    if let Some(bad) = jumps.iter().find(|a| a.nrows() != dim || a.ncols() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.nrows(),
        });
    }
    let liouvillian = Liouvillian::new(h.matrix(), jumps);
    let substeps = (grid.spacing() / grid.dt_internal() - 1e-9).ceil().max(1.0) as usize;
    let step = grid.spacing() / substeps as f64;

    let times = grid.times();
    let mut states = Vec::with_capacity(times.len());
    let mut rho = rho0.elements().clone();
    for (k, &t) in times.iter().enumerate() {
        if k > 0 {
            for _ in 0..substeps {
                rho = liouvillian.rk4_step(&rho, step);
            }
        }
        let sample = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        let trace_error = (linalg::trace(&sample).re - 1.0).abs();
        let min_eigenvalue = linalg::hermitian_eigenvalues(&sample)[0];
        if trace_error >= TRACE_TOLERANCE || min_eigenvalue <= POSITIVITY_FLOOR || !trace_error.is_finite() {
            return Err(Error::IntegrationFailure {
                t,
                trace_error,
                min_eigenvalue,
            });
        }
        states.push(DensityMatrix::from_parts_unchecked(h.register().clone(), sample));
    }
    Ok(Trajectory { times, states })
}
