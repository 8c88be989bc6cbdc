use std::time::Duration;

/// Configurable caps shared by the expensive operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest Cayley table that may be materialized.
    pub max_order: usize,
    /// Largest group whose full subgroup lattice may be built.
    pub lattice_cap: usize,
    /// Largest order handed to the exhaustive enumerator.
    pub exhaustive_cap: usize,
    /// Largest integer accepted by `factorize`.
    pub factor_bound: u64,
    pub time_budget: Option<Duration>,
    pub node_budget: Option<u64>,
    /// Worker threads for parallel searches; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Shuffles search order only.
    pub seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 5000,
            lattice_cap: 256,
            exhaustive_cap: 14,
            factor_bound: 1_000_000_000_000,
            time_budget: None,
            node_budget: None,
            workers: None,
            seed: 0,
        }
    }
}
