//! Row entropies, entropy rate and trajectory entropies.
//!
//! The trajectory entropy `H_ij` is the Shannon entropy of the law of the
//! path from `i` up to its first visit to `j` (first return when `i == j`).
//! It is computed from the fundamental matrix:
//!
//! ```text
//! B_kj = H(P_k) − 1{k = j} H(X) / π_k
//! K    = Z B
//! H_ij = K_ij − K_jj          (i ≠ j)
//! H_ii = H(X) / π_i
//! ```
//!
//! A second route expresses `H_ij` through hitting times and row entropies
//! alone (see [`lemma_decomposition`]); both ship so callers can compare them.

use crate::chain::{StationaryDistribution, StochasticMatrix};
use crate::error::{ChainError, Result};
use crate::hitting::{self, FundamentalMatrix, HittingTimes};
use crate::linalg::DenseMatrix;

/// Shannon entropy in nats of each row, with `0 log 0 = 0`.
pub fn row_entropies(p: &StochasticMatrix) -> Vec<f64> {
    p.rows().map(shannon_entropy).collect()
}

pub fn shannon_entropy(dist: &[f64]) -> f64 {
    -dist
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// `H(X) = Σ_i π_i H(P_i)`.
pub fn entropy_rate(row_h: &[f64], pi: &StationaryDistribution) -> f64 {
    assert_eq!(row_h.len(), pi.len());
    row_h.iter().zip(pi.as_slice()).map(|(h, w)| h * w).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    pub row_entropy: Vec<f64>,
    pub rate: f64,
}

impl EntropyProfile {
    pub fn new(p: &StochasticMatrix, pi: &StationaryDistribution) -> Self {
        let row_entropy = row_entropies(p);
        let rate = entropy_rate(&row_entropy, pi);
        Self { row_entropy, rate }
    }
}

/// Trajectory entropies for all ordered pairs plus commute and average
/// entropy.
#[derive(Debug, Clone)]
pub struct TrajectoryEntropyMatrix {
    h: DenseMatrix,
    commute: DenseMatrix,
    average: f64,
}

impl TrajectoryEntropyMatrix {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.h
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.h[(i, j)]
    }

    /// `H^c_ij = H_ij + H_ji`.
    pub fn commute(&self) -> &DenseMatrix {
        &self.commute
    }

    /// `H^av = Σ_{i,j} π_i π_j H_ij`, diagonal included.
    pub fn average(&self) -> f64 {
        self.average
    }

    pub fn n(&self) -> usize {
        self.h.dim()
    }
}

pub fn trajectory_entropy_matrix(
    pi: &StationaryDistribution,
    z: &FundamentalMatrix,
    row_h: &[f64],
    rate: f64,
) -> TrajectoryEntropyMatrix {
    let n = pi.len();
    let b = DenseMatrix::from_fn(n, |k, j| {
        let correction = if k == j { rate / pi[k] } else { 0.0 };
        row_h[k] - correction
    });
    let k = z.matrix().matmul(&b);
    let h = DenseMatrix::from_fn(n, |i, j| {
        if i == j {
            rate / pi[i]
        } else {
            k[(i, j)] - k[(j, j)]
        }
    });
    from_entropies(h, pi)
}

fn from_entropies(h: DenseMatrix, pi: &StationaryDistribution) -> TrajectoryEntropyMatrix {
    let n = h.dim();
    let commute = DenseMatrix::from_fn(n, |i, j| h[(i, j)] + h[(j, i)]);
    let average = average_entropy(&h, pi);
    TrajectoryEntropyMatrix {
        h,
        commute,
        average,
    }
}

/// `Σ_{i,j} π_i π_j H[i][j]`.
pub fn average_entropy(h: &DenseMatrix, pi: &StationaryDistribution) -> f64 {
    let n = h.dim();
    let mut total = 0.0;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| pi[j] * h[(i, j)]).sum();
        total += pi[i] * row;
    }
    total
}

/// `Σ_k π_k (E_j(τ_k) − E_i(τ_k)) H(P_k) + E_i(τ_j) H(X)` for `i ≠ j`.
pub fn lemma_decomposition(
    pi: &StationaryDistribution,
    e: &HittingTimes,
    row_h: &[f64],
    rate: f64,
    i: usize,
    j: usize,
) -> Result<f64> {
    let n = e.n();
    for s in [i, j] {
        if s >= n {
            return Err(ChainError::StateOutOfRange { state: s, n });
        }
    }
    if i == j {
        return Err(ChainError::StatesEqual);
    }
    let drift: f64 = (0..n)
        .map(|k| pi[k] * (e.get(j, k) - e.get(i, k)) * row_h[k])
        .sum();
    Ok(drift + e.get(i, j) * rate)
}

/// Full trajectory-entropy matrix by the hitting-time route, with the
/// diagonal set to `H(X)/π_i`.
pub fn lemma_route_matrix(
    pi: &StationaryDistribution,
    e: &HittingTimes,
    row_h: &[f64],
    rate: f64,
) -> TrajectoryEntropyMatrix {
    let n = e.n();
    let h = DenseMatrix::from_fn(n, |i, j| {
        if i == j {
            rate / pi[i]
        } else {
            lemma_decomposition(pi, e, row_h, rate, i, j).expect("indices in range and distinct")
        }
    });
    from_entropies(h, pi)
}

/// `Σ_j π_j H_ij`.
pub fn entropic_random_target_value(
    h: &TrajectoryEntropyMatrix,
    pi: &StationaryDistribution,
    i: usize,
) -> f64 {
    (0..h.n()).map(|j| pi[j] * h.get(i, j)).sum()
}

pub fn entropic_random_target_spread(
    h: &TrajectoryEntropyMatrix,
    pi: &StationaryDistribution,
) -> f64 {
    hitting::spread((0..h.n()).map(|i| entropic_random_target_value(h, pi, i)))
}

/// `(H_ij + H_jk + H_ki) − (H_ik + H_kj + H_ji)`.
pub fn entropic_cyclic_tour_residual(
    h: &TrajectoryEntropyMatrix,
    i: usize,
    j: usize,
    k: usize,
) -> Result<f64> {
    hitting::check_distinct(h.n(), &[i, j, k])?;
    Ok(hitting::tour_difference(h.matrix(), i, j, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::stationary_distribution;
    use crate::hitting::{fundamental_matrix, hitting_times};
    use approx::assert_abs_diff_eq;

    fn chain(rows: &[Vec<f64>]) -> (StochasticMatrix, StationaryDistribution) {
        let p = StochasticMatrix::new(rows).unwrap();
        let pi = stationary_distribution(&p).unwrap();
        (p, pi)
    }

    fn complete(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 / (n - 1) as f64 }).collect())
            .collect()
    }

    #[test]
    fn row_entropy_values() {
        assert_abs_diff_eq!(shannon_entropy(&[0.5, 0.0, 0.5]), 2f64.ln(), epsilon = 1e-15);
        assert_eq!(shannon_entropy(&[0.0, 1.0, 0.0]), 0.0);
        // −0.9 ln 0.9 − 0.1 ln 0.1, evaluated with mpmath at 30 digits.
        assert_abs_diff_eq!(shannon_entropy(&[0.9, 0.1]), 0.325082973391448, epsilon = 1e-15);
    }

    #[test]
    fn complete_graph_rate_is_log_degree() {
        for n in 2..8 {
            let (p, pi) = chain(&complete(n));
            let prof = EntropyProfile::new(&p, &pi);
            assert_abs_diff_eq!(prof.rate, ((n - 1) as f64).ln(), epsilon = 1e-14);
        }
    }

    #[test]
    fn two_state_rate_is_binary_entropy() {
        let p = 0.3_f64;
        let (m, pi) = chain(&[vec![1.0 - p, p], vec![p, 1.0 - p]]);
        let h = -p * p.ln() - (1.0 - p) * (1.0 - p).ln();
        assert_abs_diff_eq!(EntropyProfile::new(&m, &pi).rate, h, epsilon = 1e-15);
    }

    #[test]
    fn complete_graph_trajectory_entropy() {
        let (p, pi) = chain(&complete(4));
        let prof = EntropyProfile::new(&p, &pi);
        let z = fundamental_matrix(&p, &pi).unwrap();
        let h = trajectory_entropy_matrix(&pi, &z, &prof.row_entropy, prof.rate);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 4.0 * 3f64.ln() } else { 3.0 * 3f64.ln() };
                assert_abs_diff_eq!(h.get(i, j), want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn deterministic_rotation_has_zero_entropy() {
        let rows = vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]];
        let (p, pi) = chain(&rows);
        let prof = EntropyProfile::new(&p, &pi);
        assert_eq!(prof.rate, 0.0);
        let z = fundamental_matrix(&p, &pi).unwrap();
        let h = trajectory_entropy_matrix(&pi, &z, &prof.row_entropy, prof.rate);
        assert_eq!(h.matrix().max_abs(), 0.0);
    }

    #[test]
    fn lemma_route_rejects_equal_states() {
        let (p, pi) = chain(&complete(3));
        let prof = EntropyProfile::new(&p, &pi);
        let e = hitting_times(&fundamental_matrix(&p, &pi).unwrap(), &pi);
        assert_eq!(
            lemma_decomposition(&pi, &e, &prof.row_entropy, prof.rate, 1, 1).unwrap_err(),
            ChainError::StatesEqual
        );
        let v = lemma_decomposition(&pi, &e, &prof.row_entropy, prof.rate, 0, 1).unwrap();
        assert_abs_diff_eq!(v, 2.0 * 2f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn complete_graph_three_average_entropy() {
        let (p, pi) = chain(&complete(3));
        let prof = EntropyProfile::new(&p, &pi);
        let z = fundamental_matrix(&p, &pi).unwrap();
        let h = trajectory_entropy_matrix(&pi, &z, &prof.row_entropy, prof.rate);
        assert_abs_diff_eq!(h.average(), (4.0 / 3.0 + 1.0) * 2f64.ln(), epsilon = 1e-12);
    }
}
