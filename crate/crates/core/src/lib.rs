//! Singular rational curves given by gluing data: dualizing modules,
//! canonical maps and models, blowups along the dualizing sheaf, and
//! normality of the canonical model, all in exact rational arithmetic.

pub mod algebra;
pub mod analysis;
pub mod canonical;
pub mod corpus;
pub mod curve;
pub mod dsl;
pub mod dualizing;
pub mod error;
pub mod normality;
pub mod report;
pub mod sheaves;

pub use error::{Error, ErrorClass, Result};

/// Numerical knobs shared by every analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    /// Multiplier on the per-cluster truncation order `4·c_max + 2`.
    pub truncation_scale: i64,
    /// Cap on the degree used for Hilbert functions and ideal checks.
    pub max_degree: Option<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { truncation_scale: 1, max_degree: None }
    }
}

impl Settings {
    pub fn with_scale(truncation_scale: i64) -> Self {
        Settings { truncation_scale, ..Settings::default() }
    }

    /// Truncation order for local expansions at a cluster.
    pub fn order(&self, cluster: &curve::Cluster) -> i64 {
        self.truncation_scale * (4 * cluster.max_conductor() + 2)
    }

    /// Fails unless `needed` expansion terms fit in the truncation order.
    pub fn guard(&self, cluster: &curve::Cluster, needed: i64, what: &str) -> Result<()> {
        let order = self.order(cluster);
        if needed > order {
            return Err(Error::TruncationInsufficient { order, what: format!("{what} at cluster {}", cluster.name) });
        }
        Ok(())
    }
}
