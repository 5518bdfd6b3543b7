use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::json;

use super::report::{fmt_f64, ExperimentReport, Table};
use super::{optimize, OptParams};
use crate::error::{Error, Result};
use crate::objective::{Evaluator, ObjectiveConfig};
use crate::optimizer::barycenter;
use crate::stats::log_log_slope;
use crate::synthgen::{generate, BenchSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingConfig {
    /// Vertex counts, strictly increasing.
    pub sizes: Vec<usize>,
    /// Generator settings; `n` and `seed` are overridden per run.
    pub template: BenchSpec,
    /// Independently generated graphs per size.
    pub reps: usize,
    /// Timed evaluations per graph; the fastest counts.
    pub inner: usize,
    pub objective: ObjectiveConfig,
    pub seed: u64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig {
            sizes: vec![500, 1000, 2000, 4000],
            template: BenchSpec::standard(500, 10, 0),
            reps: 10,
            inner: 3,
            objective: ObjectiveConfig::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub n: usize,
    /// Mean edge count over the repetitions.
    pub edges: f64,
    pub metrics: usize,
    pub reps: usize,
    pub mean_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingOutcome {
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of `ln(time)` against `ln(edges)`.
    pub slope: f64,
    pub report: ExperimentReport,
}

fn spec_for(template: &BenchSpec, n: usize, k: usize, seed: u64) -> BenchSpec {
    BenchSpec {
        n,
        k,
        seed,
        min_cluster: template.min_cluster.min(n),
        max_cluster: template.max_cluster.min(n),
        ..template.clone()
    }
}

/// Times one objective evaluation (at the barycenter, against the planted
/// clustering) for graphs of each size. Repetition `r` uses generator seed
/// `seed + r`.
pub fn scaling_study(cfg: &ScalingConfig) -> Result<ScalingOutcome> {
    if cfg.sizes.is_empty() || cfg.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("sizes must be nonempty and strictly increasing".into()));
    }
    if cfg.reps == 0 || cfg.inner == 0 {
        return Err(Error::InvalidArgument("reps and inner repetitions must be at least 1".into()));
    }
    cfg.objective.validate()?;
    let k = cfg.template.k;
    let alpha = barycenter(k);
    let mut points = Vec::with_capacity(cfg.sizes.len());
    for &n in &cfg.sizes {
        let mut total = Duration::ZERO;
        let mut edges = 0usize;
        for rep in 0..cfg.reps {
            let bench = generate(&spec_for(&cfg.template, n, k, cfg.seed.wrapping_add(rep as u64)))?;
            edges += bench.graph.n_edges();
            let evaluator = Evaluator::new(&bench.graph, &bench.planted, cfg.objective)?;
            let mut best = Duration::MAX;
            for _ in 0..cfg.inner {
                let clock = Instant::now();
                let value = evaluator.try_evaluate(&alpha)?;
                best = best.min(clock.elapsed());
                std::hint::black_box(value);
            }
            total += best;
        }
        points.push(ScalingPoint {
            n,
            edges: edges as f64 / cfg.reps as f64,
            metrics: k,
            reps: cfg.reps,
            mean_seconds: total.as_secs_f64() / cfg.reps as f64,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.edges).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean_seconds).collect();
    let slope = if points.len() >= 2 { log_log_slope(&xs, &ys) } else { f64::NAN };

    let mut report = ExperimentReport::new("scale", cfg.seed, json!({ "config": cfg }));
    report.summary.insert("log_log_slope".into(), slope);
    let mut table = Table::new("scaling", ["n", "edges", "metrics", "reps", "mean_seconds"]);
    for p in &points {
        table.push(vec![
            p.n.to_string(),
            fmt_f64(p.edges),
            p.metrics.to_string(),
            p.reps.to_string(),
            fmt_f64(p.mean_seconds),
        ]);
    }
    report.tables.push(table);
    Ok(ScalingOutcome { points, slope, report })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricScalingPoint {
    pub metrics: usize,
    pub evaluations: usize,
    pub seconds: f64,
}

/// Evaluation count and wall time of a full weight recovery as the number of
/// metrics grows, on graphs of `n` vertices.
pub fn metric_scaling_study(
    n: usize,
    metric_counts: &[usize],
    template: &BenchSpec,
    objective: ObjectiveConfig,
    params: &OptParams,
) -> Result<(Vec<MetricScalingPoint>, ExperimentReport)> {
    if metric_counts.is_empty() || metric_counts.contains(&0) {
        return Err(Error::InvalidArgument("metric counts must be nonempty and positive".into()));
    }
    let mut points = Vec::with_capacity(metric_counts.len());
    for &k in metric_counts {
        let bench = generate(&spec_for(template, n, k, params.seed))?;
        let evaluator = Evaluator::new(&bench.graph, &bench.planted, objective)?;
        let result = optimize(k, |a: &[f64]| evaluator.evaluate(a), params, None)?;
        points.push(MetricScalingPoint {
            metrics: k,
            evaluations: result.evaluations,
            seconds: result.wall_time.as_secs_f64(),
        });
    }
    let mut report = ExperimentReport::new(
        "scale_metrics",
        params.seed,
        json!({ "n": n, "metric_counts": metric_counts, "template": template, "objective": objective, "optimizer": params }),
    );
    let mut table = Table::new("metric_scaling", ["metrics", "evaluations", "seconds"]);
    for p in &points {
        table.push(vec![p.metrics.to_string(), p.evaluations.to_string(), fmt_f64(p.seconds)]);
    }
    report.tables.push(table);
    Ok((points, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rep_single_size() {
        let cfg = ScalingConfig {
            sizes: vec![200],
            template: BenchSpec::standard(200, 2, 0),
            reps: 1,
            inner: 1,
            ..Default::default()
        };
        let out = scaling_study(&cfg).unwrap();
        assert_eq!(out.points.len(), 1);
        assert_eq!(out.points[0].reps, 1);
        assert!(out.points[0].mean_seconds > 0.0);
        assert!(out.slope.is_nan());
    }

    #[test]
    fn rejects_unsorted_sizes() {
        let cfg = ScalingConfig { sizes: vec![400, 200], ..Default::default() };
        assert!(scaling_study(&cfg).is_err());
        let cfg = ScalingConfig { reps: 0, ..Default::default() };
        assert!(scaling_study(&cfg).is_err());
    }
}
