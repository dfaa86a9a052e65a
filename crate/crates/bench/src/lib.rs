//! Shared inputs for the benchmarks.

use trajent::generators::{random_irreducible, random_reversible};
use trajent::StochasticMatrix;

/// Sizes swept by the dense pipeline benchmarks.
pub const SIZES: [usize; 3] = [10, 50, 200];

pub fn dense_chain(n: usize) -> StochasticMatrix {
    random_irreducible(n, 0.5, n as u64).expect("generator yields irreducible chains")
}

pub fn reversible_chain(n: usize) -> StochasticMatrix {
    random_reversible(n, n as u64).expect("generator yields irreducible chains")
}
