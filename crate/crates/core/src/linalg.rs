//! Small dense helpers shared by the kernel modules.

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Determinant of a Hermitian positive semi-definite correlation matrix.
///
/// The imaginary residue is checked against the product of diagonal
/// magnitudes (Hadamard's bound) and then dropped.
pub(crate) fn hermitian_det(m: &Mat<Complex64>) -> Result<f64> {
    let scale: f64 = (0..m.nrows()).map(|i| m[(i, i)].norm()).product();
    let det = m.as_ref().determinant();
    if !(det.re.is_finite() && det.im.is_finite()) {
        return Err(Error::Overflow("correlation determinant is not finite".into()));
    }
    if det.im.abs() > 1e-10 * scale.max(f64::MIN_POSITIVE) && det.im.abs() > 1e-300 {
        return Err(Error::Numerical(format!(
            "correlation determinant has imaginary part {:e} against scale {scale:e}",
            det.im
        )));
    }
    Ok(det.re)
}
