use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{AgpError, Result};

/// Largest tolerated `max |M - M^dag|` before a matrix is rejected.
pub const HERMITIAN_TOL: f64 = 1e-8;

pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn checked_eigen(m: &DMatrix<Complex64>) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>> {
    if !m.is_square() {
        return Err(AgpError::invalid(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    let defect = hermiticity_defect(m);
    if defect > HERMITIAN_TOL {
        return Err(AgpError::invalid(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    let symmetric = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(SymmetricEigen::new(symmetric))
}

/// All eigenvalues of a Hermitian matrix, in descending order.
pub fn spectrum(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut values: Vec<f64> = checked_eigen(m)?.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix.
///
/// The eigenvector's phase is fixed so that its largest-modulus component
/// (lowest index on ties) is real and positive. An empty matrix yields 0
/// and an empty vector.
pub fn largest_eigenvalue(m: &DMatrix<Complex64>) -> Result<(f64, DVector<Complex64>)> {
    if m.nrows() == 0 && m.ncols() == 0 {
        return Ok((0.0, DVector::zeros(0)));
    }
    let eig = checked_eigen(m)?;
    let (best, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("non-empty spectrum");
    let mut v: DVector<Complex64> = eig.eigenvectors.column(best).into_owned();
    let norm = v.norm();
    v /= Complex64::new(norm, 0.0);

    let max_mod = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let pivot = v.iter().position(|c| c.norm() >= max_mod - 1e-12).expect("unit vector");
    let phase = v[pivot] / v[pivot].norm();
    v /= phase;
    v[pivot] = Complex64::new(v[pivot].re, 0.0);
    Ok((lambda, v))
}
