//! Hamiltonians and jump operators for the dot–Majorana system and its
//! regular-fermion controls.
//!
//! The Majorana pair is represented by the regular fermion `f` with
//! `γ₁ = i(f − f†)` and `γ₂ = f + f†`, and the gauge change `d₁ → i d₁` is
//! already applied, so the dot–Majorana Hamiltonian is built directly in its
//! working form. Energies are in units of the dot–Majorana coupling λ.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{self, ModeRegister};
use crate::linalg::{self, CMatrix};

pub const D1: &str = "D1";
pub const D2: &str = "D2";
pub const F: &str = "F";
pub const C: &str = "C";
pub const C1: &str = "C1";
pub const C2: &str = "C2";
pub const DL: &str = "DL";
pub const DR: &str = "DR";

/// Register `(D1, D2, F)` of the dot–Majorana system.
pub fn qd_mf_register() -> ModeRegister {
    ModeRegister::new([D1, D2, F]).expect("static register")
}

/// Register `(D1, D2, C)` for two dots sharing one regular fermion.
pub fn single_fermion_register() -> ModeRegister {
    ModeRegister::new([D1, D2, C]).expect("static register")
}

/// Register `(D1, D2, C1, C2)` for two dots each with its own fermion.
pub fn fermion_pair_register() -> ModeRegister {
    ModeRegister::new([D1, D2, C1, C2]).expect("static register")
}

/// Register `(DL, DR, D1, D2, F)` used by the readout protocol.
pub fn tomography_register() -> ModeRegister {
    ModeRegister::new([DL, DR, D1, D2, F]).expect("static register")
}

/// Dot levels and dot–reservoir tunnel couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotCouplings {
    pub epsilon_1: f64,
    pub epsilon_2: f64,
    pub lambda_1: f64,
    pub lambda_2: f64,
}

impl DotCouplings {
    /// Dots on resonance (`ε₁ = ε₂ = 0`) with equal couplings `λ`.
    pub fn symmetric(lambda: f64) -> Self {
        Self {
            epsilon_1: 0.0,
            epsilon_2: 0.0,
            lambda_1: lambda,
            lambda_2: lambda,
        }
    }

    fn validate(&self) -> Result<()> {
        let all = [self.epsilon_1, self.epsilon_2, self.lambda_1, self.lambda_2];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("dot parameters must be finite".into()));
        }
        if self.lambda_1 < 0.0 || self.lambda_2 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tunnel couplings must be non-negative, got ({}, {})",
                self.lambda_1, self.lambda_2
            )));
        }
        Ok(())
    }
}

impl Default for DotCouplings {
    fn default() -> Self {
        Self::symmetric(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QdMfParams {
    /// Inter-Majorana coupling ε_m.
    pub epsilon_m: f64,
    pub dots: DotCouplings,
}

impl QdMfParams {
    pub fn new(epsilon_m: f64, dots: DotCouplings) -> Result<Self> {
        dots.validate()?;
        if !epsilon_m.is_finite() {
            return Err(Error::InvalidParameter("epsilon_m must be finite".into()));
        }
        Ok(Self { epsilon_m, dots })
    }

    /// Symmetric resonant point `ε₁ = ε₂ = 0`, `λ₁ = λ₂ = 1`.
    pub fn symmetric(epsilon_m: f64) -> Self {
        Self {
            epsilon_m,
            dots: DotCouplings::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FermionModelParams {
    /// One regular fermion `c` with level `epsilon_c` coupled to both dots.
    SingleFermion { epsilon_c: f64, dots: DotCouplings },
    /// Fermions `c₁`, `c₂`, each coupled to its own dot only.
    FermionPair {
        epsilon_1f: f64,
        epsilon_2f: f64,
        dots: DotCouplings,
    },
}

impl FermionModelParams {
    fn variant_name(&self) -> &'static str {
        match self {
            Self::SingleFermion { .. } => "single_fermion",
            Self::FermionPair { .. } => "fermion_pair",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenSystemParams {
    /// Lead tunneling rate Γ.
    pub gamma: f64,
}

impl OpenSystemParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must be finite and non-negative, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }
}

/// A Hermitian operator together with the register it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    register: ModeRegister,
    matrix: CMatrix,
}

impl Hamiltonian {
    pub fn new(register: ModeRegister, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != register.dimension() || matrix.ncols() != register.dimension() {
            return Err(Error::DimensionMismatch {
                expected: register.dimension(),
                got: matrix.nrows(),
            });
        }
        let herm = linalg::hermiticity_error(&matrix);
        if herm > 1e-12 {
            return Err(Error::NotHermitian(herm));
        }
        Ok(Self { register, matrix })
    }

    pub fn zero(register: &ModeRegister) -> Self {
        Self {
            register: register.clone(),
            matrix: linalg::zeros(register.dimension()),
        }
    }

    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Operators needed to write the Hamiltonians below.
struct Ops {
    register: ModeRegister,
}

impl Ops {
    fn a(&self, m: &str) -> CMatrix {
        fock::annihilation_operator(&self.register, m).expect("mode in register")
    }

    fn n(&self, m: &str) -> CMatrix {
        fock::number_operator(&self.register, m).expect("mode in register")
    }

    /// `x† y + y† x`
    fn hop(&self, x: &str, y: &str) -> CMatrix {
        let ax = self.a(x);
        let ay = self.a(y);
        ax.adjoint() * &ay + ay.adjoint() * ax
    }

    /// `x† y† + y x`
    fn pair(&self, x: &str, y: &str) -> CMatrix {
        let ax = self.a(x);
        let ay = self.a(y);
        ax.adjoint() * ay.adjoint() + ay * ax
    }

    fn dots(&self, d: &DotCouplings, partner_1: &str, partner_2: &str) -> CMatrix {
        self.n(D1) * re(d.epsilon_1)
            + self.n(D2) * re(d.epsilon_2)
            + self.hop(D1, partner_1) * re(d.lambda_1)
            + self.hop(D2, partner_2) * re(d.lambda_2)
    }
}

/// `ε_m(f†f − ½) + Σ_j[ε_j d_j†d_j + λ_j(d_j†f + f†d_j)]
///  − λ₁(d₁†f† + f d₁) + λ₂(d₂†f† + f d₂)` on `(D1, D2, F)`.
pub fn build_qd_mf_hamiltonian(p: &QdMfParams) -> Hamiltonian {
    let ops = Ops {
        register: qd_mf_register(),
    };
    let dim = ops.register.dimension();
    let majorana = (ops.n(F) - linalg::identity(dim) * re(0.5)) * re(p.epsilon_m);
    let matrix = majorana + ops.dots(&p.dots, F, F) - ops.pair(D1, F) * re(p.dots.lambda_1)
        + ops.pair(D2, F) * re(p.dots.lambda_2);
    Hamiltonian {
        register: ops.register,
        matrix,
    }
}

/// `ε_c c†c + Σ_j[ε_j d_j†d_j + λ_j(d_j†c + c†d_j)]` on `(D1, D2, C)`.
pub fn build_single_fermion_hamiltonian(p: &FermionModelParams) -> Result<Hamiltonian> {
    let FermionModelParams::SingleFermion { epsilon_c, dots } = p else {
        return Err(Error::WrongVariant {
            expected: "single_fermion",
            got: p.variant_name(),
        });
    };
    dots.validate()?;
    let ops = Ops {
        register: single_fermion_register(),
    };
    let matrix = ops.n(C) * re(*epsilon_c) + ops.dots(dots, C, C);
    Ok(Hamiltonian {
        register: ops.register,
        matrix,
    })
}

/// `Σ_j[ε_j d_j†d_j + ε_jf c_j†c_j + λ_j(d_j†c_j + c_j†d_j)]` on `(D1, D2, C1, C2)`.
pub fn build_fermion_pair_hamiltonian(p: &FermionModelParams) -> Result<Hamiltonian> {
    let FermionModelParams::FermionPair {
        epsilon_1f,
        epsilon_2f,
        dots,
    } = p
    else {
        return Err(Error::WrongVariant {
            expected: "fermion_pair",
            got: p.variant_name(),
        });
    };
    dots.validate()?;
    let ops = Ops {
        register: fermion_pair_register(),
    };
    let matrix =
        ops.n(C1) * re(*epsilon_1f) + ops.n(C2) * re(*epsilon_2f) + ops.dots(dots, C1, C2);
    Ok(Hamiltonian {
        register: ops.register,
        matrix,
    })
}

/// `T(d_L†d₁ + d₁†d_L) + T(d_R†d₂ + d₂†d_R)` on `(DL, DR, D1, D2, F)`.
pub fn build_tomography_hamiltonian(tunnel: f64) -> Result<Hamiltonian> {
    if !tunnel.is_finite() || tunnel <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "auxiliary tunnel coupling must be positive, got {tunnel}"
        )));
    }
    let ops = Ops {
        register: tomography_register(),
    };
    let matrix = (ops.hop(DL, D1) + ops.hop(DR, D2)) * re(tunnel);
    Ok(Hamiltonian {
        register: ops.register,
        matrix,
    })
}

/// Lead-induced jump operators `[√Γ d₁, √Γ d₂]`.
pub fn lindblad_jump_operators(p: &OpenSystemParams, register: &ModeRegister) -> Result<Vec<CMatrix>> {
    let scale = re(p.gamma.sqrt());
    [D1, D2]
        .iter()
        .map(|m| Ok(fock::annihilation_operator(register, m)? * scale))
        .collect()
}
