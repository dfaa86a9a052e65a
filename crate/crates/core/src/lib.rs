//! Trajectory entropy and hitting times of finite Markov chains.
//!
//! For an irreducible chain with transition matrix `P` this crate computes
//! the stationary distribution, the fundamental matrix, expected hitting
//! and return times, row entropies, the entropy rate and the entropy of the
//! trajectories between every ordered pair of states. [`report`] checks the
//! identities tying them together, e.g. `H_ij = E_i(τ_j) · H(X)` whenever
//! all rows of `P` have the same entropy, and [`mc`] estimates the same
//! quantities by simulation.
//!
//! All entropies are in nats.

pub mod analysis;
pub mod chain;
pub mod entropy;
pub mod error;
pub mod generators;
pub mod hitting;
pub mod io;
pub mod linalg;
pub mod mc;
pub mod report;
pub mod rng;
pub mod spectral;

pub use analysis::ChainAnalysis;
pub use chain::{
    check_constant_row_entropy, check_irreducible, check_reversible, stationary_distribution,
    validate_matrix, ChainStructure, StationaryDistribution, StochasticMatrix, DEFAULT_ROW_TOL,
    DEFAULT_STRUCTURE_TOL,
};
pub use entropy::{EntropyProfile, TrajectoryEntropyMatrix};
pub use error::{ChainError, Result};
pub use generators::ChainFamily;
pub use hitting::{FundamentalMatrix, HittingTimes};
pub use mc::{McConfig, McEstimate, McPair};
pub use report::{build_report, TheoremCheck, TheoremId, VelocityReport, DEFAULT_CHECK_TOL};
pub use spectral::SpectralSummary;
