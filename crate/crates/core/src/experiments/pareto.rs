use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::report::{alpha_columns, fmt_all, fmt_f64, ExperimentReport, Table};
use super::{optimize, OptParams};
use crate::error::{Error, Result};
use crate::graph::{Clustering, MultiGraph};
use crate::metrics::modularity;
use crate::objective::{scaled_holding_powers, Evaluator, ObjectiveConfig};
use crate::optimizer::{barycenter, SearchOptions};

/// One scalarization of the trade-off.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoPoint {
    pub lambda: f64,
    pub alpha: Vec<f64>,
    pub fraction_positive: f64,
    pub modularity: f64,
    /// `modularity` divided by the reference modularity.
    pub normalized_modularity: f64,
    /// Another point is at least as good on both axes and better on one.
    pub dominated: bool,
}

#[derive(Debug, Clone)]
pub struct ParetoOutcome {
    /// In the order of the λ grid.
    pub points: Vec<ParetoPoint>,
    pub reference_modularity: f64,
    pub report: ExperimentReport,
}

impl ParetoOutcome {
    /// Non-dominated points sorted by increasing fraction positive.
    pub fn frontier(&self) -> Vec<&ParetoPoint> {
        frontier(&self.points)
    }

    /// `(max − min)` of fraction positive and normalized modularity over the
    /// frontier.
    pub fn spans(&self) -> (f64, f64) {
        spans(&self.points)
    }
}

fn frontier(points: &[ParetoPoint]) -> Vec<&ParetoPoint> {
    let mut f: Vec<&ParetoPoint> = points.iter().filter(|p| !p.dominated).collect();
    f.sort_by(|a, b| a.fraction_positive.total_cmp(&b.fraction_positive));
    f
}

fn spans(points: &[ParetoPoint]) -> (f64, f64) {
    let f = frontier(points);
    if f.is_empty() {
        return (0.0, 0.0);
    }
    let span = |get: fn(&ParetoPoint) -> f64| {
        let (lo, hi) = f
            .iter()
            .map(|p| get(p))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
        hi - lo
    };
    (span(|p| p.fraction_positive), span(|p| p.normalized_modularity))
}

/// Maximizes `(1−λ)·arctan/(n·π/2) + λ·Q` for each `λ` in the grid and
/// reports where each optimum lands on the (fraction positive, normalized
/// modularity) plane.
///
/// Modularity is normalized by that of `truth` on `reference` when given (for
/// example the pristine benchmark graph), otherwise on the uniform blend of
/// `g`. The grid points run in parallel; each search is sequential.
pub fn pareto_sweep(
    g: &MultiGraph,
    truth: &Clustering,
    lambdas: &[f64],
    beta: f64,
    reference: Option<&MultiGraph>,
    params: &OptParams,
) -> Result<ParetoOutcome> {
    if lambdas.is_empty() {
        return Err(Error::InvalidArgument("lambda grid must not be empty".into()));
    }
    truth.check_vertices(g.n_vertices())?;
    for &l in lambdas {
        ObjectiveConfig::blend(beta, l).validate()?;
    }
    let reference_modularity = match reference {
        Some(r) => {
            truth.check_vertices(r.n_vertices())?;
            modularity(&r.collapse(barycenter(r.n_metrics()))?, truth)?
        }
        None => modularity(&g.collapse(barycenter(g.n_metrics()))?, truth)?,
    };
    if reference_modularity == 0.0 {
        return Err(Error::ZeroReferenceModularity);
    }
    let k = g.n_metrics();
    let n = g.n_vertices() as f64;
    let search = OptParams {
        search: SearchOptions {
            parallel: false,
            ..params.search
        },
        ..*params
    };

    let mut points: Vec<ParetoPoint> = lambdas
        .par_iter()
        .map(|&lambda| -> Result<ParetoPoint> {
            let evaluator = Evaluator::new(g, truth, ObjectiveConfig::blend(beta, lambda))?;
            let alpha = if k == 1 {
                vec![1.0]
            } else {
                optimize(k, |a: &[f64]| evaluator.evaluate(a), &search, None)?.best_alpha
            };
            let holding = scaled_holding_powers(g, truth, &alpha)?;
            let positive = holding.iter().filter(|&&h| h > 0.0).count() as f64;
            let q = modularity(&g.collapse(&alpha)?, truth)?;
            Ok(ParetoPoint {
                lambda,
                alpha,
                fraction_positive: positive / n,
                modularity: q,
                normalized_modularity: q / reference_modularity,
                dominated: false,
            })
        })
        .collect::<Result<_>>()?;
    mark_dominated(&mut points);

    let mut report = ExperimentReport::new(
        "pareto",
        params.seed,
        json!({
            "n_vertices": g.n_vertices(),
            "n_edges": g.n_edges(),
            "metrics": g.metric_names(),
            "lambdas": lambdas,
            "beta": beta,
            "reference": if reference.is_some() { "given" } else { "uniform_blend" },
            "optimizer": params,
        }),
    );
    let (fraction_span, modularity_span) = spans(&points);
    let s = &mut report.summary;
    s.insert("reference_modularity".into(), reference_modularity);
    s.insert("frontier_points".into(), points.iter().filter(|p| !p.dominated).count() as f64);
    s.insert("fraction_positive_span".into(), fraction_span);
    s.insert("normalized_modularity_span".into(), modularity_span);

    let mut columns: Vec<String> = [
        "lambda",
        "fraction_positive",
        "modularity",
        "normalized_modularity",
        "dominated",
    ]
    .map(String::from)
    .to_vec();
    columns.extend(alpha_columns(k));
    let mut table = Table::new("pareto", columns);
    for p in &points {
        let mut row = vec![
            fmt_f64(p.lambda),
            fmt_f64(p.fraction_positive),
            fmt_f64(p.modularity),
            fmt_f64(p.normalized_modularity),
            p.dominated.to_string(),
        ];
        row.extend(fmt_all(&p.alpha));
        table.push(row);
    }
    report.tables.push(table);

    Ok(ParetoOutcome {
        points,
        reference_modularity,
        report,
    })
}

fn mark_dominated(points: &mut [ParetoPoint]) {
    let flags: Vec<bool> = points
        .iter()
        .map(|p| {
            points.iter().any(|q| {
                q.fraction_positive >= p.fraction_positive
                    && q.normalized_modularity >= p.normalized_modularity
                    && (q.fraction_positive > p.fraction_positive
                        || q.normalized_modularity > p.normalized_modularity)
            })
        })
        .collect();
    for (p, d) in points.iter_mut().zip(flags) {
        p.dominated = d;
    }
}
