use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::report::{fmt_f64, ExperimentReport, Table};
use crate::clusterer::{cluster_with_alpha, ClustererConfig};
use crate::error::{Error, Result};
use crate::graph::{Clustering, MultiGraph};
use crate::metrics::variation_of_information;
use crate::objective::{Evaluator, ObjectiveConfig};
use crate::stats::spearman;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationConfig {
    pub betas: Vec<f64>,
    /// Number of random aggregation vectors; at least 3.
    pub n_alpha: usize,
    /// Symmetric Dirichlet parameter for the samples; 1 is uniform on the
    /// simplex, smaller values favor its faces and vertices.
    pub concentration: f64,
    /// Must carry a target cluster count.
    pub clusterer: ClustererConfig,
    pub seed: u64,
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        CorrelationConfig {
            betas: vec![1e-3, 1.0, 1e3],
            n_alpha: 50,
            concentration: 1.0,
            clusterer: ClustererConfig::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaSample {
    pub alpha: Vec<f64>,
    /// VI (nats) between the clusterer's output at `alpha` and the truth.
    pub vi: f64,
    /// Arctan objective at each configured β, in grid order.
    pub objectives: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct CorrelationOutcome {
    pub samples: Vec<AlphaSample>,
    /// Spearman correlation of objective against −VI, one per β.
    pub correlations: Vec<f64>,
    pub report: ExperimentReport,
}

/// Spearman correlation of each objective series against `−vi`.
pub fn rank_correlations(objectives: &[Vec<f64>], vi: &[f64]) -> Result<Vec<f64>> {
    let neg: Vec<f64> = vi.iter().map(|d| -d).collect();
    objectives.iter().map(|o| spearman(o, &neg)).collect()
}

/// Samples random aggregation vectors and measures, per β, how well the
/// arctan objective of `truth` ranks them by the agreement (−VI) between
/// `truth` and the clustering the clusterer finds at each vector.
pub fn correlation_study(
    g: &MultiGraph,
    truth: &Clustering,
    cfg: &CorrelationConfig,
) -> Result<CorrelationOutcome> {
    if cfg.betas.is_empty() {
        return Err(Error::InvalidArgument("beta grid must not be empty".into()));
    }
    if cfg.n_alpha < 3 {
        return Err(Error::InvalidArgument(format!(
            "rank correlation needs at least 3 samples, got {}",
            cfg.n_alpha
        )));
    }
    if cfg.clusterer.target_clusters.is_none() {
        return Err(Error::InvalidArgument(
            "the correlation study needs a target cluster count for the clusterer".into(),
        ));
    }
    let gamma = Gamma::new(cfg.concentration, 1.0).map_err(|_| {
        Error::InvalidArgument(format!(
            "Dirichlet concentration must be positive and finite, got {}",
            cfg.concentration
        ))
    })?;
    truth.check_vertices(g.n_vertices())?;
    let evaluators: Vec<Evaluator<'_>> = cfg
        .betas
        .iter()
        .map(|&b| Evaluator::new(g, truth, ObjectiveConfig::arctan(b)))
        .collect::<Result<_>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let alphas: Vec<Vec<f64>> = (0..cfg.n_alpha)
        .map(|_| dirichlet(g.n_metrics(), &gamma, &mut rng))
        .collect();
    let samples: Vec<AlphaSample> = alphas
        .into_par_iter()
        .map(|alpha| -> Result<AlphaSample> {
            let found = cluster_with_alpha(g, &alpha, &cfg.clusterer)?;
            let vi = variation_of_information(&found, truth)?;
            let objectives = evaluators
                .iter()
                .map(|e| e.try_evaluate(&alpha))
                .collect::<Result<_>>()?;
            Ok(AlphaSample { alpha, vi, objectives })
        })
        .collect::<Result<_>>()?;

    let per_beta: Vec<Vec<f64>> = (0..cfg.betas.len())
        .map(|b| samples.iter().map(|s| s.objectives[b]).collect())
        .collect();
    let vi: Vec<f64> = samples.iter().map(|s| s.vi).collect();
    let correlations = rank_correlations(&per_beta, &vi)?;

    let mut report = ExperimentReport::new(
        "correlate",
        cfg.seed,
        json!({
            "n_vertices": g.n_vertices(),
            "n_edges": g.n_edges(),
            "metrics": g.metric_names(),
            "config": cfg,
        }),
    );
    for (b, r) in cfg.betas.iter().zip(&correlations) {
        report.summary.insert(format!("spearman_beta_{b}"), *r);
    }
    let mut corr = Table::new("correlation", ["beta", "spearman"]);
    for (b, r) in cfg.betas.iter().zip(&correlations) {
        corr.push(vec![fmt_f64(*b), fmt_f64(*r)]);
    }
    let mut rows = Table::new("samples", ["sample", "beta", "objective", "vi"]);
    for (i, s) in samples.iter().enumerate() {
        for (b, o) in cfg.betas.iter().zip(&s.objectives) {
            rows.push(vec![i.to_string(), fmt_f64(*b), fmt_f64(*o), fmt_f64(s.vi)]);
        }
    }
    report.tables.extend([corr, rows]);

    Ok(CorrelationOutcome {
        samples,
        correlations,
        report,
    })
}

fn dirichlet(k: usize, gamma: &Gamma<f64>, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..k).map(|_| gamma.sample(rng)).collect();
        let sum: f64 = x.iter().sum();
        // tiny concentrations can underflow every component
        if sum > 0.0 {
            return x.into_iter().map(|v| v / sum).collect();
        }
    }
}
