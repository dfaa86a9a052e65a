//! Transition-matrix data model, stationary distribution and structural
//! classification.

use std::collections::VecDeque;
use std::ops::Index;

use serde::Serialize;

use crate::entropy::row_entropies;
use crate::error::{ChainError, Result};
use crate::linalg::{DenseMatrix, Lu};

/// Default tolerance on row sums and entry ranges.
pub const DEFAULT_ROW_TOL: f64 = 1e-9;
/// Default absolute tolerance for the reversibility and constant-row-entropy tests.
pub const DEFAULT_STRUCTURE_TOL: f64 = 1e-9;

/// A validated row-stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    p: DenseMatrix,
    row_tol: f64,
    max_correction: f64,
}

impl StochasticMatrix {
    /// Validates `raw` with [`DEFAULT_ROW_TOL`].
    pub fn new(raw: &[Vec<f64>]) -> Result<Self> {
        validate_matrix(raw, DEFAULT_ROW_TOL)
    }

    pub fn n(&self) -> usize {
        self.p.dim()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.p.row(i)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.p.rows()
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.p
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.p.to_rows()
    }

    pub fn row_tol(&self) -> f64 {
        self.row_tol
    }

    /// Largest absolute change made to any entry during validation.
    pub fn max_correction(&self) -> f64 {
        self.max_correction
    }

    /// Applies a state relabeling: state `i` of the result is state
    /// `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n());
        let p = DenseMatrix::from_fn(self.n(), |i, j| self.p[(perm[i], perm[j])]);
        Self {
            p,
            row_tol: self.row_tol,
            max_correction: 0.0,
        }
    }
}

impl Index<(usize, usize)> for StochasticMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.p[idx]
    }
}

/// Validates a raw square array as a transition matrix.
///
/// Entries within `row_tol` outside `[0, 1]` are clamped. A row whose sum is
/// within `row_tol` of 1 is divided by its sum, unless it already sums to 1
/// up to accumulated rounding (`4 n ε`), in which case it is left untouched.
/// That makes validation idempotent.
pub fn validate_matrix(raw: &[Vec<f64>], row_tol: f64) -> Result<StochasticMatrix> {
    let n = raw.len();
    if n == 0 {
        return Err(ChainError::Empty);
    }
    if !(row_tol >= 0.0) {
        return Err(ChainError::ParameterOutOfRange(format!(
            "row tolerance must be nonnegative, got {row_tol}"
        )));
    }
    for (row, r) in raw.iter().enumerate() {
        if r.len() != n {
            return Err(ChainError::NonSquare {
                row,
                len: r.len(),
                expected: n,
            });
        }
    }

    let rounding = 4.0 * n as f64 * f64::EPSILON;
    let mut data = Vec::with_capacity(n * n);
    let mut max_correction = 0.0_f64;
    for (row, r) in raw.iter().enumerate() {
        let mut clamped = Vec::with_capacity(n);
        for (col, &value) in r.iter().enumerate() {
            if !value.is_finite() {
                return Err(ChainError::NonFinite { row, col });
            }
            if value < -row_tol {
                return Err(ChainError::NegativeEntry { row, col, value });
            }
            clamped.push(value.clamp(0.0, 1.0));
        }
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > row_tol {
            return Err(ChainError::RowSumViolation {
                row,
                sum,
                tol: row_tol,
            });
        }
        if (sum - 1.0).abs() > rounding {
            clamped.iter_mut().for_each(|v| *v /= sum);
        }
        for (v, &orig) in clamped.iter().zip(r) {
            max_correction = max_correction.max((v - orig).abs());
        }
        data.extend(clamped);
    }

    Ok(StochasticMatrix {
        p: DenseMatrix::from_row_major(n, data),
        row_tol,
        max_correction,
    })
}

fn reaches_all(n: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if !seen[v] && edge(u, v) {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

/// Strong connectivity of the support graph (edge `i -> j` iff `P[i][j] > 0`).
///
/// State 0 must reach every state, and every state must reach state 0.
pub fn check_irreducible(p: &StochasticMatrix) -> bool {
    let n = p.n();
    reaches_all(n, |u, v| p[(u, v)] > 0.0) && reaches_all(n, |u, v| p[(v, u)] > 0.0)
}

/// Stationary distribution of an irreducible chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryDistribution {
    pi: Vec<f64>,
    residual: f64,
}

impl StationaryDistribution {
    pub fn as_slice(&self) -> &[f64] {
        &self.pi
    }

    /// `max_j |(πP)_j − π_j|`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }
}

impl Index<usize> for StationaryDistribution {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.pi[i]
    }
}

/// Solves `πP = π, Σπ = 1` by LU on `(I − P)^T` with its last equation
/// replaced by the normalization row.
pub fn stationary_distribution(p: &StochasticMatrix) -> Result<StationaryDistribution> {
    if !check_irreducible(p) {
        return Err(ChainError::NotIrreducible);
    }
    let n = p.n();
    let mut a = DenseMatrix::from_fn(n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - p[(j, i)]
    });
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;

    let mut pi = Lu::factor(&a)?.solve(&b);
    if pi.iter().any(|&x| !(x > 0.0)) {
        return Err(ChainError::SingularSystem);
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|x| *x /= total);

    let pi_p = p.as_dense().left_mul_vec(&pi);
    let residual = pi_p
        .iter()
        .zip(&pi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(StationaryDistribution { pi, residual })
}

/// Largest detailed-balance violation `max |π_i P_ij − π_j P_ji|`.
pub fn detailed_balance_violation(p: &StochasticMatrix, pi: &StationaryDistribution) -> f64 {
    let n = p.n();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((pi[i] * p[(i, j)] - pi[j] * p[(j, i)]).abs());
        }
    }
    worst
}

pub fn check_reversible(p: &StochasticMatrix, pi: &StationaryDistribution, tol: f64) -> bool {
    detailed_balance_violation(p, pi) <= tol
}

/// Spread `max_i H(P_i) − min_i H(P_i)` of the row entropies.
pub fn row_entropy_spread(p: &StochasticMatrix) -> f64 {
    let h = row_entropies(p);
    let max = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = h.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

pub fn check_constant_row_entropy(p: &StochasticMatrix, tol: f64) -> bool {
    row_entropy_spread(p) <= tol
}

/// Every row is a point mass.
pub fn is_deterministic(p: &StochasticMatrix) -> bool {
    p.rows().all(|r| r.iter().all(|&x| x == 0.0 || x == 1.0))
}

/// Structural flags gating which identities apply to a chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainStructure {
    pub irreducible: bool,
    pub reversible: bool,
    pub constant_row_entropy: bool,
    pub deterministic: bool,
    pub structure_tol: f64,
}

impl ChainStructure {
    /// Classifies `p`. Reversibility is only tested when `pi` is given,
    /// which requires an irreducible chain.
    pub fn classify(
        p: &StochasticMatrix,
        pi: Option<&StationaryDistribution>,
        structure_tol: f64,
    ) -> Self {
        let irreducible = check_irreducible(p);
        let reversible = match pi {
            Some(pi) if irreducible => check_reversible(p, pi, structure_tol),
            _ => false,
        };
        let deterministic = is_deterministic(p);
        Self {
            irreducible,
            reversible,
            constant_row_entropy: deterministic || check_constant_row_entropy(p, structure_tol),
            deterministic,
            structure_tol,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn m(rows: &[&[f64]]) -> StochasticMatrix {
        StochasticMatrix::new(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn exact_matrix_has_zero_correction() {
        let p = validate_matrix(&[vec![0.5, 0.5], vec![0.5, 0.5]], 1e-9).unwrap();
        assert_eq!(p.max_correction(), 0.0);
    }

    #[test]
    fn near_stochastic_row_is_renormalized() {
        let p = validate_matrix(&[vec![0.5, 0.5 + 2e-10], vec![0.5, 0.5]], 1e-9).unwrap();
        assert!(p.max_correction() > 0.0);
        assert_abs_diff_eq!(p.row(0).iter().sum::<f64>(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn row_sum_violation_is_reported() {
        let err = validate_matrix(&[vec![0.7, 0.4], vec![0.5, 0.5]], 1e-9).unwrap_err();
        assert!(matches!(err, ChainError::RowSumViolation { row: 0, .. }));
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(validate_matrix(&[], 1e-9).unwrap_err(), ChainError::Empty);
        assert!(matches!(
            validate_matrix(&[vec![1.0, 0.0], vec![1.0]], 1e-9).unwrap_err(),
            ChainError::NonSquare { row: 1, len: 1, expected: 2 }
        ));
        assert!(matches!(
            validate_matrix(&[vec![1.1, -0.1], vec![0.0, 1.0]], 1e-9).unwrap_err(),
            ChainError::NegativeEntry { row: 0, col: 1, .. }
        ));
        assert!(matches!(
            validate_matrix(&[vec![f64::NAN, 1.0], vec![0.0, 1.0]], 1e-9).unwrap_err(),
            ChainError::NonFinite { row: 0, col: 0 }
        ));
    }

    #[test]
    fn tiny_negative_is_clamped() {
        let p = validate_matrix(&[vec![-1e-12, 1.0 + 1e-12], vec![0.5, 0.5]], 1e-9).unwrap();
        assert_eq!(p[(0, 0)], 0.0);
        assert_eq!(p[(0, 1)], 1.0);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(check_irreducible(&m(&[&[0.7, 0.3], &[0.3, 0.7]])));
        assert!(!check_irreducible(&m(&[&[1.0, 0.0], &[0.0, 1.0]])));
        let cycle4 = m(&[
            &[0.0, 0.5, 0.0, 0.5],
            &[0.5, 0.0, 0.5, 0.0],
            &[0.0, 0.5, 0.0, 0.5],
            &[0.5, 0.0, 0.5, 0.0],
        ]);
        assert!(check_irreducible(&cycle4));
        // One-way reachability is not enough.
        assert!(!check_irreducible(&m(&[&[0.5, 0.5], &[0.0, 1.0]])));
        assert!(check_irreducible(&m(&[&[1.0]])));
    }

    #[test]
    fn stationary_of_symmetric_two_state() {
        for p in [0.1, 0.3, 0.9] {
            let pi = stationary_distribution(&m(&[&[1.0 - p, p], &[p, 1.0 - p]])).unwrap();
            assert_abs_diff_eq!(pi[0], 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(pi[1], 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn stationary_of_rank_one() {
        let row = [0.1, 0.2, 0.7];
        let pi = stationary_distribution(&m(&[&row, &row, &row])).unwrap();
        for (a, b) in pi.as_slice().iter().zip(row) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert!(pi.residual() < 1e-15);
    }

    #[test]
    fn stationary_rejects_reducible() {
        assert_eq!(
            stationary_distribution(&m(&[&[1.0, 0.0], &[0.5, 0.5]])).unwrap_err(),
            ChainError::NotIrreducible
        );
    }

    #[test]
    fn reversibility_examples() {
        // Rank-one: π_i P_ij = π_i π_j = π_j P_ji for every pair, so detailed
        // balance holds even for non-uniform π.
        let row = [0.1, 0.2, 0.7];
        let p = m(&[&row, &row, &row]);
        let pi = stationary_distribution(&p).unwrap();
        assert!(check_reversible(&p, &pi, 1e-9));

        let rot = m(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        let pi = stationary_distribution(&rot).unwrap();
        assert!(!check_reversible(&rot, &pi, 1e-9));

        let k4 = m(&[
            &[0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
            &[1.0 / 3.0, 0.0, 1.0 / 3.0, 1.0 / 3.0],
            &[1.0 / 3.0, 1.0 / 3.0, 0.0, 1.0 / 3.0],
            &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0],
        ]);
        let pi = stationary_distribution(&k4).unwrap();
        assert!(check_reversible(&k4, &pi, 1e-9));
    }

    #[test]
    fn constant_row_entropy_examples() {
        assert!(!check_constant_row_entropy(&m(&[&[0.9, 0.1], &[0.5, 0.5]]), 1e-9));
        assert!(check_constant_row_entropy(
            &m(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]),
            1e-9
        ));
    }

    #[test]
    fn deterministic_implies_constant_row_entropy() {
        let rot = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let pi = stationary_distribution(&rot).unwrap();
        let s = ChainStructure::classify(&rot, Some(&pi), DEFAULT_STRUCTURE_TOL);
        assert!(s.deterministic && s.constant_row_entropy && s.irreducible && s.reversible);
    }

    #[test]
    fn reversibility_needs_stationary_distribution() {
        let p = m(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let s = ChainStructure::classify(&p, None, DEFAULT_STRUCTURE_TOL);
        assert!(!s.irreducible && !s.reversible);
    }
}
