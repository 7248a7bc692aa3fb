//! Dense complex matrix helpers shared by the rest of the crate.
//!
//! Everything here works on small (≤ 32×32) `nalgebra` matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn zeros(dim: usize) -> CMatrix {
    CMatrix::zeros(dim, dim)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Largest element modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest element modulus of `m - m†`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues are returned in
/// ascending order, with eigenvectors as the matching columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Apply `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> Complex64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let diag = CVector::from_iterator(values.len(), values.iter().map(|&x| f(x)));
    &vectors * CMatrix::from_diagonal(&diag) * vectors.adjoint()
}

/// Principal square root of a positive semi-definite matrix. Eigenvalues at
/// or below `floor` (round-off around a zero eigenvalue) are treated as zero.
pub fn psd_sqrt_with_floor(m: &CMatrix, floor: f64) -> CMatrix {
    hermitian_function(m, |x| Complex64::new(if x > floor { x.sqrt() } else { 0.0 }, 0.0))
}

/// Eigenvalues of a unit-trace state below this are indistinguishable from
/// round-off of the eigen-solver.
pub const ROUND_OFF_EIGENVALUE: f64 = 1e-14;

pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    psd_sqrt_with_floor(m, 0.0)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²` between two density matrices,
/// evaluated as the squared trace norm of `√ρ √σ`.
pub fn fidelity(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let a = psd_sqrt_with_floor(rho, ROUND_OFF_EIGENVALUE);
    let b = psd_sqrt_with_floor(sigma, ROUND_OFF_EIGENVALUE);
    let s: f64 = singular_values(&(a * b)).iter().sum();
    s * s
}

pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_reconstructs_matrix() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.3, -0.4),
                Complex64::new(0.3, 0.4),
                Complex64::new(-2.0, 0.0),
            ],
        );
        let (vals, vecs) = hermitian_eigen(&m);
        assert!(vals[0] < vals[1]);
        let back = &vecs * CMatrix::from_diagonal(&CVector::from_iterator(2, vals.iter().map(|&x| Complex64::new(x, 0.0)))) * vecs.adjoint();
        assert!(max_abs(&(back - m)) < 1e-14);
    }

    #[test]
    fn fidelity_of_identical_and_orthogonal_states() {
        let mut a = zeros(2);
        a[(0, 0)] = ONE;
        let mut b = zeros(2);
        b[(1, 1)] = ONE;
        assert!((fidelity(&a, &a) - 1.0).abs() < 1e-12);
        assert!(fidelity(&a, &b).abs() < 1e-12);
        let mixed = identity(2) * Complex64::new(0.5, 0.0);
        assert!((fidelity(&a, &mixed) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.7, 0.0),
                Complex64::new(0.1, 0.2),
                Complex64::new(0.1, -0.2),
                Complex64::new(0.3, 0.0),
            ],
        );
        let r = psd_sqrt(&m);
        assert!(max_abs(&(&r * &r - &m)) < 1e-14);
    }
}
