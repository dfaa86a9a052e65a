//! Fundamental matrix and expected hitting, return and commute times.

use crate::chain::{StationaryDistribution, StochasticMatrix};
use crate::error::{ChainError, Result};
use crate::linalg::{DenseMatrix, Lu};

/// `Z = (I − P + Π)^{-1}`, where every row of `Π` is `π`.
#[derive(Debug, Clone)]
pub struct FundamentalMatrix {
    z: DenseMatrix,
    inverse_residual: f64,
    row_sum_residual: f64,
}

impl FundamentalMatrix {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.z
    }

    /// `max |((I − P + Π) Z − I)_ij|`.
    pub fn inverse_residual(&self) -> f64 {
        self.inverse_residual
    }

    /// `max_i |Σ_k Z_ik − 1|`.
    pub fn row_sum_residual(&self) -> f64 {
        self.row_sum_residual
    }
}

pub fn fundamental_matrix(
    p: &StochasticMatrix,
    pi: &StationaryDistribution,
) -> Result<FundamentalMatrix> {
    let n = p.n();
    let a = DenseMatrix::from_fn(n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - p[(i, j)] + pi[j]
    });
    let z = Lu::factor(&a)?.inverse();
    let inverse_residual = a.matmul(&z).max_abs_diff(&DenseMatrix::identity(n));
    let row_sum_residual = z
        .rows()
        .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(FundamentalMatrix {
        z,
        inverse_residual,
        row_sum_residual,
    })
}

/// Expected hitting times `E_i(τ_j)`, return times `E_i(τ_i⁺)` and derived
/// global quantities.
#[derive(Debug, Clone)]
pub struct HittingTimes {
    expected: DenseMatrix,
    returns: Vec<f64>,
    average: f64,
    commute: DenseMatrix,
}

impl HittingTimes {
    /// `E_i(τ_j)`; zero on the diagonal.
    pub fn expected(&self) -> &DenseMatrix {
        &self.expected
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.expected[(i, j)]
    }

    /// `E_i(τ_i⁺) = 1/π_i`.
    pub fn return_times(&self) -> &[f64] {
        &self.returns
    }

    /// `t^av = Σ_{i,j} π_i π_j E_i(τ_j)`.
    pub fn average(&self) -> f64 {
        self.average
    }

    /// `t^c_ij = E_i(τ_j) + E_j(τ_i)`.
    pub fn commute(&self) -> &DenseMatrix {
        &self.commute
    }

    pub fn n(&self) -> usize {
        self.expected.dim()
    }
}

/// Reads hitting times off the fundamental matrix via
/// `E_i(τ_j) = (Z_jj − Z_ij) / π_j`.
pub fn hitting_times(z: &FundamentalMatrix, pi: &StationaryDistribution) -> HittingTimes {
    let zm = z.matrix();
    let n = zm.dim();
    let expected = DenseMatrix::from_fn(n, |i, j| {
        if i == j {
            0.0
        } else {
            (zm[(j, j)] - zm[(i, j)]) / pi[j]
        }
    });
    let returns = pi.as_slice().iter().map(|&x| 1.0 / x).collect();
    let commute = DenseMatrix::from_fn(n, |i, j| expected[(i, j)] + expected[(j, i)]);
    let average = average_hitting_time(&expected, pi);
    HittingTimes {
        expected,
        returns,
        average,
        commute,
    }
}

/// `Σ_{i,j} π_i π_j E[i][j]`; the zero diagonal contributes nothing.
pub fn average_hitting_time(expected: &DenseMatrix, pi: &StationaryDistribution) -> f64 {
    let n = expected.dim();
    let mut total = 0.0;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| pi[j] * expected[(i, j)]).sum();
        total += pi[i] * row;
    }
    total
}

/// `Σ_j π_j E_i(τ_j)`, which the random target lemma says is the same for
/// every starting state `i`.
pub fn random_target_value(e: &HittingTimes, pi: &StationaryDistribution, i: usize) -> f64 {
    (0..e.n()).map(|j| pi[j] * e.get(i, j)).sum()
}

/// `max_i − min_i` of [`random_target_value`].
pub fn random_target_spread(e: &HittingTimes, pi: &StationaryDistribution) -> f64 {
    spread((0..e.n()).map(|i| random_target_value(e, pi, i)))
}

pub(crate) fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if lo.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

/// Forward tour `i → j → k → i` minus the reverse tour, for any matrix of
/// pairwise quantities.
pub(crate) fn tour_difference(m: &DenseMatrix, i: usize, j: usize, k: usize) -> f64 {
    (m[(i, j)] + m[(j, k)] + m[(k, i)]) - (m[(i, k)] + m[(k, j)] + m[(j, i)])
}

pub(crate) fn check_distinct(n: usize, states: &[usize]) -> Result<()> {
    for &s in states {
        if s >= n {
            return Err(ChainError::StateOutOfRange { state: s, n });
        }
    }
    for (a, &s) in states.iter().enumerate() {
        if states[a + 1..].contains(&s) {
            return Err(ChainError::StatesNotDistinct);
        }
    }
    Ok(())
}

/// Cyclic tour residual of hitting times; zero for reversible chains.
pub fn cyclic_tour_residual(e: &HittingTimes, i: usize, j: usize, k: usize) -> Result<f64> {
    check_distinct(e.n(), &[i, j, k])?;
    Ok(tour_difference(e.expected(), i, j, k))
}

/// Largest absolute cyclic tour residual over all distinct triples; zero
/// when there are fewer than three states.
pub fn max_cyclic_tour_residual(m: &DenseMatrix) -> f64 {
    let n = m.dim();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                worst = worst.max(tour_difference(m, i, j, k).abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::stationary_distribution;
    use approx::assert_abs_diff_eq;

    fn chain(rows: &[&[f64]]) -> (StochasticMatrix, StationaryDistribution) {
        let p = StochasticMatrix::new(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap();
        let pi = stationary_distribution(&p).unwrap();
        (p, pi)
    }

    #[test]
    fn fair_coin_fundamental_matrix_is_identity() {
        let (p, pi) = chain(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let z = fundamental_matrix(&p, &pi).unwrap();
        assert!(z.matrix().max_abs_diff(&DenseMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn rank_one_fundamental_matrix_is_identity() {
        let row = [0.1, 0.2, 0.7];
        let (p, pi) = chain(&[&row, &row, &row]);
        let z = fundamental_matrix(&p, &pi).unwrap();
        assert!(z.matrix().max_abs_diff(&DenseMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn four_cycle_rows_sum_to_one() {
        let (p, pi) = chain(&[
            &[0.0, 0.5, 0.0, 0.5],
            &[0.5, 0.0, 0.5, 0.0],
            &[0.0, 0.5, 0.0, 0.5],
            &[0.5, 0.0, 0.5, 0.0],
        ]);
        let z = fundamental_matrix(&p, &pi).unwrap();
        assert!(z.row_sum_residual() < 1e-12);
        assert!(z.inverse_residual() < 1e-12);
    }

    #[test]
    fn two_state_hitting_time_is_inverse_flip_probability() {
        let (p, pi) = chain(&[&[0.75, 0.25], &[0.25, 0.75]]);
        let e = hitting_times(&fundamental_matrix(&p, &pi).unwrap(), &pi);
        assert_abs_diff_eq!(e.get(0, 1), 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.get(1, 0), 4.0, epsilon = 1e-12);
        assert_eq!(e.get(0, 0), 0.0);
        assert_abs_diff_eq!(e.return_times()[0], 2.0, epsilon = 1e-12);
        // t^av = 2 · (1/4) · (1/p) = 1/(2p).
        assert_abs_diff_eq!(e.average(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn cyclic_tour_rejects_repeated_states() {
        let (p, pi) = chain(&[&[0.0, 0.5, 0.5], &[0.5, 0.0, 0.5], &[0.5, 0.5, 0.0]]);
        let e = hitting_times(&fundamental_matrix(&p, &pi).unwrap(), &pi);
        assert_eq!(cyclic_tour_residual(&e, 0, 1, 1).unwrap_err(), ChainError::StatesNotDistinct);
        assert!(matches!(
            cyclic_tour_residual(&e, 0, 1, 7).unwrap_err(),
            ChainError::StateOutOfRange { state: 7, n: 3 }
        ));
        assert_abs_diff_eq!(cyclic_tour_residual(&e, 0, 1, 2).unwrap(), 0.0, epsilon = 1e-12);
    }
}
