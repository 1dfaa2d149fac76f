//! Small dense symmetric-matrix helpers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Smallest admissible eigenvalue, relative to the largest.
pub const EIGEN_RELATIVE_THRESHOLD: f64 = 1e-10;

/// Symmetric eigendecomposition that rejects (numerically) singular or
/// indefinite input.
fn checked_eigen(m: &DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::domain(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    let threshold = EIGEN_RELATIVE_THRESHOLD * max.max(0.0);
    if max <= 0.0 || min <= threshold {
        return Err(Error::SingularMatrix {
            context: String::new(),
            eigenvalue: min,
            threshold,
        });
    }
    Ok(eig)
}

/// `M^{-1/2}` for a symmetric positive definite `M`.
pub fn inverse_sqrt_spd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = checked_eigen(m)?;
    let scale = eig.eigenvalues.map(|l| 1.0 / l.sqrt());
    let v = &eig.eigenvectors;
    let w = v * DMatrix::from_diagonal(&scale) * v.transpose();
    Ok((&w + w.transpose()) * 0.5)
}

/// `vᵀ M⁻¹ v` for symmetric positive definite `M`.
pub fn spd_quadratic_form(m: &DMatrix<f64>, v: &DVector<f64>) -> Result<f64> {
    let eig = checked_eigen(m)?;
    let proj = eig.eigenvectors.transpose() * v;
    Ok(proj
        .iter()
        .zip(eig.eigenvalues.iter())
        .map(|(p, l)| p * p / l)
        .sum::<f64>()
        .max(0.0))
}

/// `M⁻¹` for symmetric positive definite `M`.
pub fn spd_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = checked_eigen(m)?;
    let v = &eig.eigenvectors;
    let inv = v * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l)) * v.transpose();
    Ok((&inv + inv.transpose()) * 0.5)
}
