//! Certification report: evaluates every entropy/hitting-time identity that
//! applies to a chain and records residuals.

use std::fmt;

use serde::Serialize;

use crate::analysis::ChainAnalysis;
use crate::chain::{ChainStructure, StochasticMatrix, DEFAULT_STRUCTURE_TOL};
use crate::entropy::entropic_random_target_spread;
use crate::error::Result;
use crate::hitting::max_cyclic_tour_residual;

/// Default absolute tolerance on check residuals.
pub const DEFAULT_CHECK_TOL: f64 = 1e-8;
/// Inequality checks pass when every slack is at least `-BOUND_SLACK_TOL`.
pub const BOUND_SLACK_TOL: f64 = 1e-8;

/// Identifiers of the checks, declared in their serialized (sorted) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TheoremId {
    /// `H^av = (t^av + 1) H(X)` under constant row entropy.
    #[serde(rename = "average_T132")]
    Average,
    /// `(t^rel + 1) H(X) <= H^av <= ((n − 1) t^rel + 1) log n`.
    #[serde(rename = "bounds_T132")]
    Bounds,
    /// `H^c_ij = t^c_ij H(X)` for `i != j`, on any chain.
    #[serde(rename = "commute_T131")]
    Commute,
    /// Entropic cyclic tour identity.
    #[serde(rename = "cyclic_tour_T134")]
    CyclicTour,
    /// `t^av = Σ_{i>=2} 1/(1 − λ_i)`.
    #[serde(rename = "eigentime_remark")]
    Eigentime,
    /// Agreement of the two trajectory-entropy routes and the diagonal identity.
    #[serde(rename = "lemma21")]
    Lemma,
    /// `Σ_j π_j H_ij` independent of `i`.
    #[serde(rename = "random_target_T133")]
    RandomTarget,
    /// `H_ij = E_i(τ_j) H(X)`, `H_ii = E_i(τ_i⁺) H(X)`.
    #[serde(rename = "velocity_T12")]
    Velocity,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        Self::Average,
        Self::Bounds,
        Self::Commute,
        Self::CyclicTour,
        Self::Eigentime,
        Self::Lemma,
        Self::RandomTarget,
        Self::Velocity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Average => "average_T132",
            Self::Bounds => "bounds_T132",
            Self::Commute => "commute_T131",
            Self::CyclicTour => "cyclic_tour_T134",
            Self::Eigentime => "eigentime_remark",
            Self::Lemma => "lemma21",
            Self::RandomTarget => "random_target_T133",
            Self::Velocity => "velocity_T12",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSlacks {
    /// `H^av − (t^rel + 1) H(X)`.
    pub lower: f64,
    /// `((n − 1) t^rel + 1) log n − H^av`.
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub id: TheoremId,
    pub applicable: bool,
    pub max_residual: Option<f64>,
    /// `None` exactly when the check is not applicable.
    pub passed: Option<bool>,
    pub slacks: Option<BoundSlacks>,
    pub detail: String,
}

impl TheoremCheck {
    fn skipped(id: TheoremId, detail: impl Into<String>) -> Self {
        Self {
            id,
            applicable: false,
            max_residual: None,
            passed: None,
            slacks: None,
            detail: detail.into(),
        }
    }

    fn equality(id: TheoremId, residual: f64, tol: f64, detail: impl Into<String>) -> Self {
        Self {
            id,
            applicable: true,
            max_residual: Some(residual),
            passed: Some(residual <= tol),
            slacks: None,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportScalars {
    pub rate: f64,
    pub t_av: f64,
    pub h_av: f64,
    pub t_rel: Option<f64>,
    pub eigentime: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocityReport {
    pub n: usize,
    pub structure: ChainStructure,
    pub scalars: ReportScalars,
    /// Sorted by id.
    pub checks: Vec<TheoremCheck>,
    pub tolerance: f64,
}

impl VelocityReport {
    pub fn check(&self, id: TheoremId) -> &TheoremCheck {
        self.checks
            .iter()
            .find(|c| c.id == id)
            .expect("every id has a check")
    }

    pub fn applicable(&self) -> impl Iterator<Item = &TheoremCheck> {
        self.checks.iter().filter(|c| c.applicable)
    }

    /// True iff every applicable check passed.
    pub fn all_passed(&self) -> bool {
        self.applicable().all(|c| c.passed == Some(true))
    }
}

/// Evaluates both relaxation-time bounds on the average entropy.
pub fn check_bounds(h_av: f64, rate: f64, t_rel: f64, n: usize) -> TheoremCheck {
    let log_n = (n as f64).ln();
    let slacks = BoundSlacks {
        lower: h_av - (t_rel + 1.0) * rate,
        upper: ((n as f64 - 1.0) * t_rel + 1.0) * log_n - h_av,
    };
    let worst = slacks.lower.min(slacks.upper);
    TheoremCheck {
        id: TheoremId::Bounds,
        applicable: true,
        max_residual: Some((-worst).max(0.0)),
        passed: Some(worst >= -BOUND_SLACK_TOL),
        slacks: Some(slacks),
        detail: format!(
            "lower slack {:.3e}, upper slack {:.3e}",
            slacks.lower, slacks.upper
        ),
    }
}

/// Runs the full pipeline on `p` and evaluates every check at tolerance `tol`.
pub fn build_report(p: &StochasticMatrix, tol: f64) -> Result<VelocityReport> {
    let analysis = ChainAnalysis::new(p, DEFAULT_STRUCTURE_TOL)?;
    Ok(report_from_analysis(&analysis, tol))
}

pub fn report_from_analysis(a: &ChainAnalysis, tol: f64) -> VelocityReport {
    let n = a.n();
    let s = a.structure;
    let pi = &a.stationary;
    let rate = a.entropy.rate;
    let e = &a.hitting;
    let h = &a.trajectory;
    let t_av = e.average();
    let h_av = h.average();

    let mut checks = Vec::with_capacity(TheoremId::ALL.len());

    // General identities.
    let mut commute = 0.0_f64;
    let mut velocity = 0.0_f64;
    for i in 0..n {
        velocity = velocity.max((h.get(i, i) - e.return_times()[i] * rate).abs());
        for j in 0..n {
            if i != j {
                commute = commute.max((h.commute()[(i, j)] - e.commute()[(i, j)] * rate).abs());
                velocity = velocity.max((h.get(i, j) - e.get(i, j) * rate).abs());
            }
        }
    }
    checks.push(TheoremCheck::equality(
        TheoremId::Commute,
        commute,
        tol,
        "max |H^c_ij - t^c_ij H(X)| over i != j",
    ));
    let diagonal = (0..n)
        .map(|i| (h.get(i, i) * pi[i] - rate).abs())
        .fold(0.0, f64::max);
    let routes = a.route_disagreement();
    checks.push(TheoremCheck::equality(
        TheoremId::Lemma,
        routes.max(diagonal),
        tol,
        format!("route disagreement {routes:.3e}, diagonal residual {diagonal:.3e}"),
    ));

    // Constant row entropy.
    const NEEDS_CRE: &str = "requires constant row entropy";
    if s.constant_row_entropy {
        checks.push(TheoremCheck::equality(
            TheoremId::Velocity,
            velocity,
            tol,
            "max |H_ij - E_i(tau_j) H(X)|, return time on the diagonal",
        ));
        checks.push(TheoremCheck::equality(
            TheoremId::Average,
            (h_av - (t_av + 1.0) * rate).abs(),
            tol,
            "|H^av - (t^av + 1) H(X)|",
        ));
        checks.push(TheoremCheck::equality(
            TheoremId::RandomTarget,
            entropic_random_target_spread(h, pi),
            tol,
            "spread of sum_j pi_j H_ij over starting states",
        ));
    } else {
        for id in [TheoremId::Velocity, TheoremId::Average, TheoremId::RandomTarget] {
            checks.push(TheoremCheck::skipped(id, NEEDS_CRE));
        }
    }

    // Reversibility.
    if s.constant_row_entropy && s.reversible {
        let detail = if n < 3 {
            "fewer than three states; holds vacuously"
        } else {
            "max over distinct triples of the tour difference"
        };
        checks.push(TheoremCheck::equality(
            TheoremId::CyclicTour,
            max_cyclic_tour_residual(h.matrix()),
            tol,
            detail,
        ));
    } else {
        checks.push(TheoremCheck::skipped(
            TheoremId::CyclicTour,
            "requires constant row entropy and reversibility",
        ));
    }

    match (&a.spectral, s.reversible) {
        (Some(spec), true) => {
            checks.push(TheoremCheck::equality(
                TheoremId::Eigentime,
                (spec.eigentime - t_av).abs(),
                tol,
                "|sum_{i>=2} 1/(1 - lambda_i) - t^av|",
            ));
            if s.constant_row_entropy {
                checks.push(check_bounds(h_av, rate, spec.relaxation_time, n));
            } else {
                checks.push(TheoremCheck::skipped(TheoremId::Bounds, NEEDS_CRE));
            }
        }
        (None, true) => {
            for id in [TheoremId::Eigentime, TheoremId::Bounds] {
                checks.push(TheoremCheck::skipped(id, "single-state chain has no spectral gap"));
            }
        }
        _ => {
            for id in [TheoremId::Eigentime, TheoremId::Bounds] {
                checks.push(TheoremCheck::skipped(id, "requires reversibility"));
            }
        }
    }

    checks.sort_by_key(|c| c.id);

    VelocityReport {
        n,
        structure: s,
        scalars: ReportScalars {
            rate,
            t_av,
            h_av,
            t_rel: a.spectral.as_ref().map(|sp| sp.relaxation_time),
            eigentime: a.spectral.as_ref().map(|sp| sp.eigentime),
        },
        checks,
        tolerance: tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ChainError;
    use crate::generators::{complete_graph, two_state};

    #[test]
    fn complete_graph_passes_everything() {
        let r = build_report(&complete_graph(5).unwrap(), DEFAULT_CHECK_TOL).unwrap();
        assert_eq!(r.applicable().count(), 8);
        assert!(r.all_passed());
        let ids: Vec<_> = r.checks.iter().map(|c| c.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn passed_present_iff_applicable() {
        let p = StochasticMatrix::new(&[vec![0.9, 0.1], vec![0.5, 0.5]]).unwrap();
        let r = build_report(&p, DEFAULT_CHECK_TOL).unwrap();
        for c in &r.checks {
            assert_eq!(c.passed.is_some(), c.applicable, "{}", c.id);
        }
    }

    #[test]
    fn bounds_at_rank_one_uniform_upper_is_tight() {
        let n = 6;
        let c = check_bounds(n as f64 * (n as f64).ln(), (n as f64).ln(), 1.0, n);
        let slacks = c.slacks.unwrap();
        assert!(slacks.upper.abs() < 1e-12);
        assert_eq!(c.passed, Some(true));
    }

    #[test]
    fn violated_bound_fails() {
        // H^av below the lower bound.
        let c = check_bounds(0.5, 1.0, 1.0, 3);
        assert_eq!(c.passed, Some(false));
        assert!(c.max_residual.unwrap() > 1.0);
    }

    #[test]
    fn two_state_lower_bound_attained() {
        let r = build_report(&two_state(0.3).unwrap(), DEFAULT_CHECK_TOL).unwrap();
        let b = r.check(TheoremId::Bounds);
        assert!(b.slacks.unwrap().lower.abs() <= 1e-8);
        assert!(r.all_passed());
    }

    #[test]
    fn reducible_chain_is_rejected() {
        let p = StochasticMatrix::new(&[vec![1.0, 0.0], vec![0.3, 0.7]]).unwrap();
        assert_eq!(build_report(&p, 1e-8).unwrap_err(), ChainError::NotIrreducible);
    }

    #[test]
    fn single_state_chain() {
        let p = StochasticMatrix::new(&[vec![1.0]]).unwrap();
        let r = build_report(&p, DEFAULT_CHECK_TOL).unwrap();
        assert!(r.all_passed());
        assert!(!r.check(TheoremId::Bounds).applicable);
    }
}
