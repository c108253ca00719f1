//! Budgets and run settings shared by the library and the CLI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Largest group enumerated by closure.
    pub max_group_order: u64,
    /// Search-tree nodes allowed in one short-vector enumeration.
    pub enumeration_node_cap: u64,
    /// Search-tree nodes allowed in one sublattice or chain search.
    pub sublattice_node_cap: u64,
    /// Largest minimal-flag count for which the C-matrix is assembled.
    pub c_matrix_cap: u64,
    /// Worker threads; 0 lets the runtime decide.
    pub threads: usize,
    pub seed: u64,
    /// Tolerance for float diagnostics only.
    pub tolerance: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_group_order: 1_000_000,
            enumeration_node_cap: 2_000_000_000,
            sublattice_node_cap: 50_000_000,
            c_matrix_cap: 50_000,
            threads: 0,
            seed: 0x5eed,
            tolerance: 1e-9,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let caps = [
            ("max_group_order", self.max_group_order),
            ("enumeration_node_cap", self.enumeration_node_cap),
            ("sublattice_node_cap", self.sublattice_node_cap),
            ("c_matrix_cap", self.c_matrix_cap),
        ];
        for (name, v) in caps {
            if v == 0 {
                return Err(Error::OutOfRange(format!("{name} must be positive")));
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::OutOfRange("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Runs `f` on a thread pool of the configured size.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match rayon::ThreadPoolBuilder::new().num_threads(self.threads).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}
