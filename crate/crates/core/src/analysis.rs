//! One-shot pipeline computing every quantity for a chain.

use crate::chain::{stationary_distribution, ChainStructure, StationaryDistribution, StochasticMatrix};
use crate::entropy::{lemma_route_matrix, trajectory_entropy_matrix, EntropyProfile, TrajectoryEntropyMatrix};
use crate::error::Result;
use crate::hitting::{fundamental_matrix, hitting_times, FundamentalMatrix, HittingTimes};
use crate::spectral::SpectralSummary;

#[derive(Debug, Clone)]
pub struct ChainAnalysis {
    pub matrix: StochasticMatrix,
    pub stationary: StationaryDistribution,
    pub structure: ChainStructure,
    pub fundamental: FundamentalMatrix,
    pub hitting: HittingTimes,
    pub entropy: EntropyProfile,
    /// Trajectory entropies by the fundamental-matrix route.
    pub trajectory: TrajectoryEntropyMatrix,
    /// Trajectory entropies by the hitting-time route.
    pub trajectory_by_hitting: TrajectoryEntropyMatrix,
    /// Present for reversible chains with at least two states.
    pub spectral: Option<SpectralSummary>,
}

impl ChainAnalysis {
    pub fn new(p: &StochasticMatrix, structure_tol: f64) -> Result<Self> {
        let stationary = stationary_distribution(p)?;
        let structure = ChainStructure::classify(p, Some(&stationary), structure_tol);
        let fundamental = fundamental_matrix(p, &stationary)?;
        let hitting = hitting_times(&fundamental, &stationary);
        let entropy = EntropyProfile::new(p, &stationary);
        let trajectory =
            trajectory_entropy_matrix(&stationary, &fundamental, &entropy.row_entropy, entropy.rate);
        let trajectory_by_hitting =
            lemma_route_matrix(&stationary, &hitting, &entropy.row_entropy, entropy.rate);
        let spectral = if structure.reversible && p.n() >= 2 {
            Some(SpectralSummary::new(p, &stationary, structure_tol)?)
        } else {
            None
        };
        Ok(Self {
            matrix: p.clone(),
            stationary,
            structure,
            fundamental,
            hitting,
            entropy,
            trajectory,
            trajectory_by_hitting,
            spectral,
        })
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Largest disagreement between the two trajectory-entropy routes.
    pub fn route_disagreement(&self) -> f64 {
        self.trajectory
            .matrix()
            .max_abs_diff(self.trajectory_by_hitting.matrix())
    }
}
