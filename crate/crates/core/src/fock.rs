//! Fermionic Fock space over a small, ordered set of modes.
//!
//! A [`ModeRegister`] fixes both the occupation-basis index convention and the
//! operator ordering. The first label is the most significant bit of a basis
//! index, and the basis ket `|n_1, ..., n_k⟩` is defined as
//! `(a_1†)^{n_1} ... (a_k†)^{n_k} |vac⟩`. Annihilators carry a Jordan–Wigner
//! string over the modes that precede them, so with this gauge every basis ket
//! is a single `+1` amplitude.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, ONE, ZERO};

/// Largest register we are willing to build densely (2^10 = 1024).
pub const MAX_MODES: usize = 10;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-8;
const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeRegister {
    labels: Vec<String>,
}

impl ModeRegister {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_MODES {
            return Err(Error::RegisterSize {
                got: labels.len(),
                max: MAX_MODES,
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateMode(l.clone()));
            }
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mode_count(&self) -> usize {
        self.labels.len()
    }

    pub fn dimension(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    /// Position of a mode in register order.
    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    /// Bit mask of a mode within a basis index.
    pub(crate) fn bit(&self, position: usize) -> usize {
        1 << (self.labels.len() - 1 - position)
    }

    /// Basis index of an occupation pattern.
    pub fn index_of(&self, occupations: &[u8]) -> Result<usize> {
        if occupations.len() != self.labels.len() {
            return Err(Error::OccupationLength {
                expected: self.labels.len(),
                got: occupations.len(),
            });
        }
        occupations.iter().try_fold(0usize, |acc, &n| match n {
            0 | 1 => Ok((acc << 1) | n as usize),
            other => Err(Error::OccupationValue(other)),
        })
    }

    /// Occupation pattern of a basis index.
    pub fn occupations_of(&self, index: usize) -> Vec<u8> {
        (0..self.labels.len())
            .map(|p| u8::from(index & self.bit(p) != 0))
            .collect()
    }
}

/// Jordan–Wigner annihilator for `mode` under the register's ordering.
pub fn annihilation_operator(register: &ModeRegister, mode: &str) -> Result<CMatrix> {
    let pos = register.position(mode)?;
    let n = register.mode_count();
    let dim = register.dimension();
    let bit = register.bit(pos);
    let mut m = linalg::zeros(dim);
    for s in 0..dim {
        if s & bit == 0 {
            continue;
        }
        // occupied modes preceding `pos` are the bits above `bit`
        let preceding = (s >> (n - pos)).count_ones();
        let sign = if preceding.is_multiple_of(2) { 1.0 } else { -1.0 };
        m[(s ^ bit, s)] = Complex64::new(sign, 0.0);
    }
    Ok(m)
}

pub fn creation_operator(register: &ModeRegister, mode: &str) -> Result<CMatrix> {
    Ok(annihilation_operator(register, mode)?.adjoint())
}

pub fn number_operator(register: &ModeRegister, mode: &str) -> Result<CMatrix> {
    let bit = register.bit(register.position(mode)?);
    let diag = CVector::from_fn(register.dimension(), |s, _| {
        if s & bit != 0 {
            ONE
        } else {
            ZERO
        }
    });
    Ok(CMatrix::from_diagonal(&diag))
}

pub fn total_number_operator(register: &ModeRegister) -> CMatrix {
    let diag = CVector::from_fn(register.dimension(), |s, _| {
        Complex64::new(s.count_ones() as f64, 0.0)
    });
    CMatrix::from_diagonal(&diag)
}

/// `(-1)^N` for the total number operator `N`.
pub fn parity_operator(register: &ModeRegister) -> CMatrix {
    let diag = CVector::from_fn(register.dimension(), |s, _| {
        Complex64::new(if s.count_ones() % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
    });
    CMatrix::from_diagonal(&diag)
}

/// The Majorana pair `(γ₁, γ₂) = (i(f − f†), f + f†)` built from the regular
/// fermion `f_mode`.
pub fn majorana_pair(register: &ModeRegister, f_mode: &str) -> Result<(CMatrix, CMatrix)> {
    let f = annihilation_operator(register, f_mode)?;
    let fd = f.adjoint();
    let gamma1 = (&f - &fd) * linalg::I;
    let gamma2 = f + fd;
    Ok((gamma1, gamma2))
}

/// A normalized pure state over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    register: ModeRegister,
    amplitudes: CVector,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(register: ModeRegister, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != register.dimension() {
            return Err(Error::DimensionMismatch {
                expected: register.dimension(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            register,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` before wrapping them.
    pub fn normalized(register: ModeRegister, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Self::new(register, amplitudes.unscale(norm))
    }

    pub(crate) fn from_parts_unchecked(register: ModeRegister, amplitudes: CVector) -> Self {
        Self {
            register,
            amplitudes,
        }
    }

    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn amplitude(&self, occupations: &[u8]) -> Result<Complex64> {
        Ok(self.amplitudes[self.register.index_of(occupations)?])
    }

    /// `⟨ψ|op|ψ⟩`.
    pub fn expectation(&self, op: &CMatrix) -> Result<Complex64> {
        if op.nrows() != self.amplitudes.len() || op.ncols() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                got: op.nrows(),
            });
        }
        Ok(self.amplitudes.dotc(&(op * &self.amplitudes)))
    }

    /// `|ψ⟩ ⊗ |φ⟩` on the concatenated register (modes of `self` first).
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let register = concat_registers(&self.register, &other.register)?;
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        Ok(Self::from_parts_unchecked(register, amplitudes))
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::from_parts_unchecked(self.register.clone(), linalg::outer(&self.amplitudes))
    }
}

/// Unit vector for an occupation pattern (gauge: creation operators applied
/// in register order to the vacuum).
pub fn basis_ket(register: &ModeRegister, occupations: &[u8]) -> Result<StateVector> {
    let idx = register.index_of(occupations)?;
    let mut amplitudes = CVector::zeros(register.dimension());
    amplitudes[idx] = ONE;
    Ok(StateVector::from_parts_unchecked(register.clone(), amplitudes))
}

pub fn vacuum(register: &ModeRegister) -> StateVector {
    let mut amplitudes = CVector::zeros(register.dimension());
    amplitudes[0] = ONE;
    StateVector::from_parts_unchecked(register.clone(), amplitudes)
}

/// A mixed state over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    register: ModeRegister,
    elements: CMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity before wrapping.
    pub fn new(register: ModeRegister, elements: CMatrix) -> Result<Self> {
        let dim = register.dimension();
        if elements.nrows() != dim || elements.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: elements.nrows(),
            });
        }
        let herm = linalg::hermiticity_error(&elements);
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = linalg::trace(&elements);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = linalg::hermitian_eigenvalues(&elements)[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { register, elements })
    }

    pub(crate) fn from_parts_unchecked(register: ModeRegister, elements: CMatrix) -> Self {
        Self { register, elements }
    }

    pub fn maximally_mixed(register: &ModeRegister) -> Self {
        let dim = register.dimension();
        let elements = linalg::identity(dim) * Complex64::new(1.0 / dim as f64, 0.0);
        Self::from_parts_unchecked(register.clone(), elements)
    }

    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    pub fn elements(&self) -> &CMatrix {
        &self.elements
    }

    pub fn into_elements(self) -> CMatrix {
        self.elements
    }

    pub fn dimension(&self) -> usize {
        self.elements.nrows()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.elements).re
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::hermiticity_error(&self.elements)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.elements)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn purity(&self) -> f64 {
        linalg::trace(&(&self.elements * &self.elements)).re
    }

    /// Population of a basis state.
    pub fn population(&self, occupations: &[u8]) -> Result<f64> {
        let i = self.register.index_of(occupations)?;
        Ok(self.elements[(i, i)].re)
    }

    pub fn expectation(&self, op: &CMatrix) -> Result<Complex64> {
        if op.nrows() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: op.nrows(),
            });
        }
        Ok(linalg::trace(&(&self.elements * op)))
    }

    /// `ρ ⊗ σ` on the concatenated register (modes of `self` first).
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let register = concat_registers(&self.register, &other.register)?;
        Ok(Self::from_parts_unchecked(
            register,
            self.elements.kronecker(&other.elements),
        ))
    }

    /// Conjugates by a unitary on the same register.
    pub fn transformed(&self, unitary: &CMatrix) -> Result<DensityMatrix> {
        if unitary.nrows() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: unitary.nrows(),
            });
        }
        Ok(Self::from_parts_unchecked(
            self.register.clone(),
            unitary * &self.elements * unitary.adjoint(),
        ))
    }
}

fn concat_registers(a: &ModeRegister, b: &ModeRegister) -> Result<ModeRegister> {
    ModeRegister::new(a.labels().iter().chain(b.labels()).cloned())
}

/// Reduced density matrix on the modes in `keep`.
///
/// The result lives on a register holding the kept modes in their original
/// register order, whatever order `keep` lists them in. The trace is a plain
/// tensor-factor trace in the ket gauge of [`basis_ket`].
pub fn partial_trace(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let reg = rho.register();
    let mut kept: Vec<usize> = keep
        .iter()
        .map(|l| reg.position(l))
        .collect::<Result<_>>()?;
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..reg.mode_count()).filter(|p| !kept.contains(p)).collect();

    let sub = ModeRegister::new(kept.iter().map(|&p| reg.labels()[p].clone()))?;
    let sub_dim = sub.dimension();
    let env_dim = 1usize << traced.len();

    // scatter a compact index over a list of register positions into a full index
    let scatter = |compact: usize, positions: &[usize]| -> usize {
        let k = positions.len();
        positions.iter().enumerate().fold(0usize, |acc, (j, &p)| {
            if compact & (1 << (k - 1 - j)) != 0 {
                acc | reg.bit(p)
            } else {
                acc
            }
        })
    };
    let kept_idx: Vec<usize> = (0..sub_dim).map(|i| scatter(i, &kept)).collect();
    let env_idx: Vec<usize> = (0..env_dim).map(|e| scatter(e, &traced)).collect();

    let full = rho.elements();
    let elements = CMatrix::from_fn(sub_dim, sub_dim, |i, j| {
        env_idx
            .iter()
            .map(|&e| full[(kept_idx[i] | e, kept_idx[j] | e)])
            .sum()
    });
    Ok(DensityMatrix::from_parts_unchecked(sub, elements))
}
