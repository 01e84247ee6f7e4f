//! Dense spectral kernels shared by the diagnostics. Two independent routes are
//! kept apart on purpose: singular values of the synthesis matrix (one-sided
//! bidiagonalization) and eigenvalues of the Hermitian Gram matrix (tridiagonal QR).

use nalgebra::{SymmetricEigen, SVD};

use crate::seqcore::{CMatrix, C64};

/// Singular values, descending. Length `min(rows, cols)`.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Eigenvalues of the Hermitian part `(M + Mᴴ)/2`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Operator 2-norm.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}
