//! Trace norm, trace distance, and their classical special case.

use crate::error::{Error, Result};
use crate::numerics::eig::eig_hermitian;
use crate::numerics::matrix::{HermitianMatrix, ProbabilityVector};
use crate::tolerance;

/// Sum of absolute eigenvalues.
pub fn trace_norm(m: &HermitianMatrix) -> f64 {
    if m.dim() == 1 {
        return m.get(0, 0).re.abs();
    }
    eig_hermitian(m).eigenvalues.iter().map(|l| l.abs()).sum()
}

/// Checks unit trace and positive semidefiniteness within `tol`.
pub fn validate_state(m: &HermitianMatrix, tol: f64) -> Result<()> {
    let trace = m.trace();
    if (trace - 1.0).abs() > tol {
        return Err(Error::NotUnitTrace { trace, tol });
    }
    let min = if m.dim() == 1 {
        m.get(0, 0).re
    } else {
        eig_hermitian(m).min_eigenvalue()
    };
    if min < -tol {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// `d(rho, sigma) = ||rho - sigma||_1 / 2` for two density operators.
pub fn trace_distance(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    validate_state(rho, tolerance::STATE)?;
    validate_state(sigma, tolerance::STATE)?;
    Ok(0.5 * trace_norm(&rho.sub(sigma)))
}

/// `||p - q||_1 / 2` for two distributions over the same outcome set.
pub fn statistical_distance(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let sum: f64 = p
        .as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(0.5 * sum)
}
