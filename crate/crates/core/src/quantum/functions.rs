//! Matrix functions of Hermitian operators via their spectra.

use super::eig::{hermitian_eig, SpectralDecomp};
use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::LogBase;

/// Eigenvalues at or below this are treated as kernel by support-restricted
/// functions.
pub const SUPPORT_EPS: f64 = 1e-12;

/// Eigenvalues down to `-PSD_TOL` are accepted as numerically zero.
pub const PSD_TOL: f64 = 1e-10;

/// `log` on the support of a positive semidefinite matrix, zero on its kernel.
pub fn matrix_log_on_support(m: &CMatrix, base: LogBase) -> Result<CMatrix> {
    let d = hermitian_eig(m)?;
    check_psd(&d)?;
    Ok(log_on_support(&d, base))
}

pub(crate) fn log_on_support(d: &SpectralDecomp, base: LogBase) -> CMatrix {
    d.map(|l| if l > SUPPORT_EPS { base.log(l) } else { 0.0 })
}

/// `exp` of a Hermitian matrix.
pub fn matrix_exp(m: &CMatrix) -> Result<CMatrix> {
    Ok(hermitian_eig(m)?.map(f64::exp))
}

pub(crate) fn check_psd(d: &SpectralDecomp) -> Result<()> {
    match d.eigenvalues.last() {
        Some(&min) if min < -PSD_TOL => Err(Error::invalid(format!(
            "matrix is not positive semidefinite (eigenvalue {min:e})"
        ))),
        _ => Ok(()),
    }
}
