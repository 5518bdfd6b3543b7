//! Drivers for the weight-recovery studies.
//!
//! - [`recover_weights`]: maximize an objective on the ground truth and
//!   compare holding-power distributions before and after.
//! - [`inverse_recover`]: cluster the composite graph and minimize the
//!   variation of information to the ground truth.
//! - [`pareto_sweep`]: trade holding power against modularity.
//! - [`correlation_study`]: how well the objective predicts clusterer
//!   agreement, per steepness.
//! - [`scaling_study`]: objective evaluation time against graph size.
//!
//! Every driver returns typed results together with an [`ExperimentReport`]
//! holding the tables the CLI writes out.

mod correlation;
mod inverse;
mod pareto;
mod recover;
mod report;
mod scaling;

use serde::Serialize;

pub use correlation::{correlation_study, rank_correlations, CorrelationConfig, CorrelationOutcome, AlphaSample};
pub use inverse::{inverse_recover, InverseOutcome};
pub use pareto::{pareto_sweep, ParetoOutcome, ParetoPoint};
pub use recover::{recover_weights, RecoverConfig, RecoverOutcome};
pub use report::{alpha_columns, ExperimentReport, Table, TableFormat};
pub use scaling::{metric_scaling_study, scaling_study, MetricScalingPoint, ScalingConfig, ScalingOutcome, ScalingPoint};

use crate::error::Result;
use crate::optimizer::{multistart_with, start_points, OptProblem, OptResult, SearchOptions};

/// Optimizer settings shared by the drivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptParams {
    pub search: SearchOptions,
    /// Uniform random starts added after the barycenter and basis vectors.
    pub random_starts: usize,
    pub seed: u64,
}

impl Default for OptParams {
    fn default() -> Self {
        OptParams {
            search: SearchOptions::default(),
            random_starts: 3,
            seed: 0,
        }
    }
}

pub(crate) fn basis_vectors(k: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|j| {
            let mut e = vec![0.0; k];
            e[j] = 1.0;
            e
        })
        .collect()
}

/// Multistart from the barycenter, every basis vector, then random points.
pub(crate) fn optimize<F>(k: usize, objective: F, params: &OptParams, total_budget: Option<usize>) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let starts = start_points(k, &basis_vectors(k), params.random_starts, params.seed);
    let problem = OptProblem::new(k, objective, params.search);
    multistart_with(&problem, &starts, total_budget, params.seed)
}
