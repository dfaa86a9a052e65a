//! Example chains with closed-form ground truth, plus seeded random families.

use serde::{Deserialize, Serialize};

use crate::chain::{check_irreducible, validate_matrix, StochasticMatrix, DEFAULT_ROW_TOL};
use crate::error::{ChainError, Result};
use crate::rng;

/// Parameterized chain families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainFamily {
    TwoState { p: f64 },
    Complete { n: usize },
    RankOne { pi: Vec<f64> },
    Cycle { n: usize },
    Circulant { first_row: Vec<f64> },
    RandomIrreducible { n: usize, density: f64, seed: u64 },
    RandomReversible { n: usize, seed: u64 },
    RandomSymmetric { n: usize, seed: u64 },
    RandomCirculant { n: usize, seed: u64 },
}

impl ChainFamily {
    pub fn build(&self) -> Result<StochasticMatrix> {
        match self {
            Self::TwoState { p } => two_state(*p),
            Self::Complete { n } => complete_graph(*n),
            Self::RankOne { pi } => rank_one(pi),
            Self::Cycle { n } => cycle(*n),
            Self::Circulant { first_row } => circulant(first_row),
            Self::RandomIrreducible { n, density, seed } => random_irreducible(*n, *density, *seed),
            Self::RandomReversible { n, seed } => random_reversible(*n, *seed),
            Self::RandomSymmetric { n, seed } => random_symmetric(*n, *seed),
            Self::RandomCirculant { n, seed } => random_circulant(*n, *seed),
        }
    }
}

fn out_of_range(msg: impl Into<String>) -> ChainError {
    ChainError::ParameterOutOfRange(msg.into())
}

fn finish(rows: Vec<Vec<f64>>) -> Result<StochasticMatrix> {
    validate_matrix(&rows, DEFAULT_ROW_TOL)
}

fn normalized(weights: Vec<f64>) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// `[[1 − p, p], [p, 1 − p]]` for `p ∈ (0, 1)`.
pub fn two_state(p: f64) -> Result<StochasticMatrix> {
    if !(p > 0.0 && p < 1.0) {
        return Err(out_of_range(format!("two-state p must lie in (0, 1), got {p}")));
    }
    finish(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
}

/// Random walk on the complete graph without self-loops.
pub fn complete_graph(n: usize) -> Result<StochasticMatrix> {
    if n < 2 {
        return Err(out_of_range(format!("complete graph needs n >= 2, got {n}")));
    }
    let w = 1.0 / (n - 1) as f64;
    finish(
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { w }).collect())
            .collect(),
    )
}

/// Every row equal to `pi`; `pi` must be strictly positive.
pub fn rank_one(pi: &[f64]) -> Result<StochasticMatrix> {
    if pi.is_empty() {
        return Err(out_of_range("rank-one distribution is empty"));
    }
    if let Some(x) = pi.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
        return Err(out_of_range(format!(
            "rank-one distribution must be strictly positive, found {x}"
        )));
    }
    let total: f64 = pi.iter().sum();
    if (total - 1.0).abs() > DEFAULT_ROW_TOL {
        return Err(out_of_range(format!(
            "rank-one distribution sums to {total}, not 1"
        )));
    }
    finish(vec![pi.to_vec(); pi.len()])
}

/// Simple random walk on the n-cycle.
pub fn cycle(n: usize) -> Result<StochasticMatrix> {
    if n < 3 {
        return Err(out_of_range(format!("cycle needs n >= 3, got {n}")));
    }
    let mut row = vec![0.0; n];
    row[1] = 0.5;
    row[n - 1] = 0.5;
    circulant(&row)
}

/// Row `i` is `first_row` shifted right by `i`: `P_ij = first_row[(j − i) mod n]`.
pub fn circulant(first_row: &[f64]) -> Result<StochasticMatrix> {
    let n = first_row.len();
    if n == 0 {
        return Err(out_of_range("circulant first row is empty"));
    }
    // Validating n copies of the row checks it with the matrix rules.
    validate_matrix(&vec![first_row.to_vec(); n], DEFAULT_ROW_TOL)
        .map_err(|e| out_of_range(format!("circulant first row is not stochastic: {e}")))?;
    let p = finish(
        (0..n)
            .map(|i| (0..n).map(|j| first_row[(j + n - i) % n]).collect())
            .collect(),
    )?;
    if !check_irreducible(&p) {
        return Err(ChainError::NotIrreducible);
    }
    Ok(p)
}

/// Seeded random irreducible chain.
///
/// Draws, in order: a uniformly random permutation `σ` (Fisher–Yates from
/// the last index down) whose cycle `σ_0 → σ_1 → … → σ_0` guarantees
/// irreducibility; then, for every cell in row-major order, one uniform `u`
/// deciding inclusion (cycle edges always included, others iff
/// `u < density`) followed, for included cells only, by one uniform `v`
/// giving the weight `0.1 + v`. Rows are then normalized.
pub fn random_irreducible(n: usize, density: f64, seed: u64) -> Result<StochasticMatrix> {
    if n < 2 {
        return Err(out_of_range(format!("random chain needs n >= 2, got {n}")));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(out_of_range(format!("density must lie in (0, 1], got {density}")));
    }
    let mut rng = rng::seeded(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        let swap = rng::below(&mut rng, k + 1);
        order.swap(k, swap);
    }
    let mut on_cycle = vec![false; n * n];
    for k in 0..n {
        on_cycle[order[k] * n + order[(k + 1) % n]] = true;
    }
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let u = rng::unit_f64(&mut rng);
            if on_cycle[i * n + j] || u < density {
                rows[i][j] = 0.1 + rng::unit_f64(&mut rng);
            }
        }
    }
    finish(rows.into_iter().map(normalized).collect())
}

fn symmetric_weights(n: usize, seed: u64, with_diagonal: bool) -> Vec<Vec<f64>> {
    let mut rng = rng::seeded(seed);
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        let start = if with_diagonal { i } else { i + 1 };
        for j in start..n {
            let x = 0.1 + rng::unit_f64(&mut rng);
            w[i][j] = x;
            w[j][i] = x;
        }
    }
    w
}

/// Seeded reversible chain: symmetric weights `W_ij = 0.1 + u` drawn for
/// `i <= j` in row-major order, `P_ij = W_ij / Σ_k W_ik`. The stationary
/// distribution is proportional to the row sums of `W`.
pub fn random_reversible(n: usize, seed: u64) -> Result<StochasticMatrix> {
    if n < 2 {
        return Err(out_of_range(format!("random chain needs n >= 2, got {n}")));
    }
    finish(symmetric_weights(n, seed, true).into_iter().map(normalized).collect())
}

/// Seeded symmetric (hence doubly stochastic and reversible with uniform
/// `π`) chain: off-diagonal weights `W_ij = 0.1 + u` drawn for `i < j` in
/// row-major order, `P_ij = W_ij / c` with `c = max_i Σ_k W_ik + 0.5`, and
/// the diagonal absorbing the remainder.
pub fn random_symmetric(n: usize, seed: u64) -> Result<StochasticMatrix> {
    if n < 2 {
        return Err(out_of_range(format!("random chain needs n >= 2, got {n}")));
    }
    let w = symmetric_weights(n, seed, false);
    let c = w
        .iter()
        .map(|r| r.iter().sum::<f64>())
        .fold(0.0, f64::max)
        + 0.5;
    let mut rows: Vec<Vec<f64>> = w
        .into_iter()
        .map(|r| r.into_iter().map(|x| x / c).collect())
        .collect();
    for (i, row) in rows.iter_mut().enumerate() {
        let off: f64 = row.iter().sum();
        row[i] = 1.0 - off;
    }
    finish(rows)
}

/// Seeded circulant chain. Shift 1 always carries weight, so the support
/// generates `Z_n`; every other shift `k` (in increasing order) draws a
/// uniform `u` and is included iff `u < 0.5`, with weight `0.1 + v` from a
/// second uniform.
pub fn random_circulant(n: usize, seed: u64) -> Result<StochasticMatrix> {
    if n < 2 {
        return Err(out_of_range(format!("random chain needs n >= 2, got {n}")));
    }
    let mut rng = rng::seeded(seed);
    let mut row = vec![0.0; n];
    for (k, slot) in row.iter_mut().enumerate() {
        let u = rng::unit_f64(&mut rng);
        if k == 1 || u < 0.5 {
            *slot = 0.1 + rng::unit_f64(&mut rng);
        }
    }
    circulant(&normalized(row))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{check_constant_row_entropy, check_reversible, stationary_distribution};

    #[test]
    fn two_state_values() {
        let p = two_state(0.25).unwrap();
        assert_eq!(p.to_rows(), vec![vec![0.75, 0.25], vec![0.25, 0.75]]);
        assert_eq!(two_state(0.5).unwrap().to_rows(), vec![vec![0.5; 2]; 2]);
        for bad in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(two_state(bad), Err(ChainError::ParameterOutOfRange(_))));
        }
    }

    #[test]
    fn complete_graph_values() {
        assert_eq!(
            complete_graph(3).unwrap().to_rows(),
            vec![vec![0.0, 0.5, 0.5], vec![0.5, 0.0, 0.5], vec![0.5, 0.5, 0.0]]
        );
        assert_eq!(complete_graph(2).unwrap().to_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(complete_graph(1).is_err());
    }

    #[test]
    fn rank_one_values() {
        let p = rank_one(&[0.1, 0.2, 0.7]).unwrap();
        for r in p.rows() {
            assert_eq!(r, &[0.1, 0.2, 0.7]);
        }
        assert!(rank_one(&[1.0, 0.0]).is_err());
        assert!(rank_one(&[0.5, 0.6]).is_err());
    }

    #[test]
    fn cycle_values() {
        assert_eq!(cycle(3).unwrap(), complete_graph(3).unwrap());
        assert!(cycle(2).is_err());
        let c4 = cycle(4).unwrap();
        assert_eq!(c4.row(0), &[0.0, 0.5, 0.0, 0.5]);
        assert_eq!(c4.row(1), &[0.5, 0.0, 0.5, 0.0]);
    }

    #[test]
    fn circulant_examples() {
        let p = circulant(&[0.0, 0.5, 0.5, 0.0]).unwrap();
        assert_ne!(p, cycle(4).unwrap());
        assert!(check_irreducible(&p));
        assert!(check_irreducible(&circulant(&[0.0, 0.5, 0.0, 0.5]).unwrap()));
        let rot = circulant(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(rot.row(2), &[1.0, 0.0, 0.0]);
        // Shift 2 alone on Z_4 only reaches even states.
        assert_eq!(
            circulant(&[0.0, 0.0, 1.0, 0.0]).unwrap_err(),
            ChainError::NotIrreducible
        );
        assert!(matches!(
            circulant(&[0.5, 0.6]).unwrap_err(),
            ChainError::ParameterOutOfRange(_)
        ));
    }

    #[test]
    fn random_irreducible_is_deterministic_and_irreducible() {
        let a = random_irreducible(5, 0.5, 42).unwrap();
        let b = random_irreducible(5, 0.5, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_irreducible(5, 0.5, 43).unwrap());
        for seed in 0..50 {
            let p = random_irreducible(2 + (seed as usize % 9), 0.2, seed).unwrap();
            assert!(check_irreducible(&p));
        }
        let dense = random_irreducible(3, 1.0, 11).unwrap();
        assert!(dense.rows().all(|r| r.iter().all(|&x| x > 0.0)));
        assert!(random_irreducible(1, 0.5, 0).is_err());
        assert!(random_irreducible(4, 0.0, 0).is_err());
    }

    #[test]
    fn random_reversible_is_reversible() {
        assert_eq!(random_reversible(4, 7).unwrap(), random_reversible(4, 7).unwrap());
        for seed in 0..20 {
            let p = random_reversible(6, seed).unwrap();
            assert!(check_irreducible(&p));
            let pi = stationary_distribution(&p).unwrap();
            assert!(check_reversible(&p, &pi, 1e-10));
        }
    }

    #[test]
    fn random_symmetric_is_doubly_stochastic() {
        for seed in 0..20 {
            let p = random_symmetric(5, seed).unwrap();
            for i in 0..5 {
                let col: f64 = (0..5).map(|k| p[(k, i)]).sum();
                assert!((col - 1.0).abs() < 1e-14);
                for j in 0..5 {
                    assert_eq!(p[(i, j)], p[(j, i)]);
                }
            }
        }
    }

    #[test]
    fn random_circulant_has_constant_row_entropy() {
        for seed in 0..20 {
            let p = random_circulant(7, seed).unwrap();
            assert!(check_constant_row_entropy(&p, 1e-12));
        }
    }

    #[test]
    fn family_dispatch() {
        let fam = ChainFamily::Cycle { n: 5 };
        assert_eq!(fam.build().unwrap(), cycle(5).unwrap());
        let json = serde_json::to_string(&ChainFamily::TwoState { p: 0.3 }).unwrap();
        assert_eq!(json, r#"{"kind":"two_state","p":0.3}"#);
    }
}
