//! Spectra of reversible chains: relaxation time and the eigentime sum.

use serde::Serialize;

use crate::chain::{detailed_balance_violation, StationaryDistribution, StochasticMatrix};
use crate::error::{ChainError, Result};
use crate::linalg::{symmetric_eigenvalues, DenseMatrix};

/// Eigenvalues closer than this to 1 (beyond the leading one) make the
/// spectrum degenerate.
const GAP_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    /// Sorted non-increasing.
    pub eigenvalues: Vec<f64>,
    pub relaxation_time: f64,
    pub eigentime: f64,
}

impl SpectralSummary {
    pub fn new(p: &StochasticMatrix, pi: &StationaryDistribution, tol: f64) -> Result<Self> {
        let eigenvalues = reversible_eigenvalues(p, pi, tol)?;
        Ok(Self {
            relaxation_time: relaxation_time(&eigenvalues)?,
            eigentime: eigentime(&eigenvalues)?,
            eigenvalues,
        })
    }
}

/// Eigenvalues of a reversible `P`, sorted non-increasing.
///
/// `P` is similar to the symmetric `S_ij = sqrt(π_i / π_j) P_ij`, which is
/// diagonalized by cyclic Jacobi rotations.
pub fn reversible_eigenvalues(
    p: &StochasticMatrix,
    pi: &StationaryDistribution,
    tol: f64,
) -> Result<Vec<f64>> {
    let violation = detailed_balance_violation(p, pi);
    if violation > tol {
        return Err(ChainError::NotReversible { violation });
    }
    let s = DenseMatrix::from_fn(p.n(), |i, j| (pi[i] / pi[j]).sqrt() * p[(i, j)]);
    let mut eigs = symmetric_eigenvalues(&s);
    eigs.sort_by(|a, b| b.total_cmp(a));
    Ok(eigs)
}

fn gap(lambda: f64) -> Result<f64> {
    if lambda >= 1.0 - GAP_FLOOR {
        Err(ChainError::DegenerateSpectrum { lambda })
    } else {
        Ok(1.0 - lambda)
    }
}

/// `1 / (1 − λ₂)`.
pub fn relaxation_time(eigs: &[f64]) -> Result<f64> {
    let lambda2 = *eigs
        .get(1)
        .ok_or(ChainError::DegenerateSpectrum { lambda: f64::NAN })?;
    Ok(1.0 / gap(lambda2)?)
}

/// `Σ_{i≥2} 1 / (1 − λ_i)`.
pub fn eigentime(eigs: &[f64]) -> Result<f64> {
    eigs.iter().skip(1).map(|&l| gap(l).map(|g| 1.0 / g)).sum()
}
