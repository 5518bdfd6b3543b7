use serde::Serialize;
use serde_json::json;

use super::report::{alpha_columns, fmt_all, fmt_f64, ExperimentReport, Table};
use super::{optimize, OptParams};
use crate::error::{Error, Result};
use crate::graph::{AlphaVector, Clustering, MultiGraph, Normalization};
use crate::objective::{
    scaled_holding_powers, Evaluator, Histogram, HoldingReport, ObjectiveConfig,
    DEFAULT_HISTOGRAM_BINS,
};
use crate::optimizer::OptResult;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoverConfig {
    pub objective: ObjectiveConfig,
    pub opt: OptParams,
    pub histogram_bins: usize,
}

impl Default for RecoverConfig {
    fn default() -> Self {
        RecoverConfig {
            objective: ObjectiveConfig::default(),
            opt: OptParams::default(),
            histogram_bins: DEFAULT_HISTOGRAM_BINS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RecoverOutcome {
    pub alpha: AlphaVector,
    pub objective_value: f64,
    /// One report per metric used alone (`α = e_k`).
    pub slice_reports: Vec<HoldingReport>,
    pub pristine_report: Option<HoldingReport>,
    pub optimized_report: HoldingReport,
    /// Mean fraction of positive holding power over the single metrics.
    pub perturbed_average: f64,
    pub best_single: f64,
    /// `None` when `K = 1` and no search was needed.
    pub optimization: Option<OptResult>,
    pub report: ExperimentReport,
}

/// Finds the aggregation vector maximizing the configured objective for
/// the ground-truth clustering `truth`.
///
/// Holding powers in the returned reports are computed on composite weights
/// rescaled to unit mean, so histograms of different vectors share a scale.
/// `pristine`, when given, is a single-metric graph on the same edges whose
/// report is included for comparison.
pub fn recover_weights(
    g: &MultiGraph,
    truth: &Clustering,
    pristine: Option<&MultiGraph>,
    cfg: &RecoverConfig,
) -> Result<RecoverOutcome> {
    truth.check_vertices(g.n_vertices())?;
    if let Some(p) = pristine {
        if p.n_metrics() != 1 || p.n_edges() != g.n_edges() || p.n_vertices() != g.n_vertices() {
            return Err(Error::InvalidArgument(
                "pristine graph must be single-metric on the same edges".into(),
            ));
        }
    }
    let k = g.n_metrics();
    let evaluator = Evaluator::new(g, truth, cfg.objective)?;

    let (alpha, value, optimization) = if k == 1 {
        let alpha = AlphaVector::basis(1, 0);
        let value = evaluator.try_evaluate(alpha.coeffs())?;
        (alpha, value, None)
    } else {
        let result = optimize(k, |a: &[f64]| evaluator.evaluate(a), &cfg.opt, None)?;
        let alpha = AlphaVector::from_simplex_unchecked(result.best_alpha.clone());
        (alpha, result.best_value, Some(result))
    };

    let slice_values: Vec<Vec<f64>> = (0..k)
        .map(|j| scaled_holding_powers(g, truth, AlphaVector::basis(k, j)))
        .collect::<Result<_>>()?;
    let pristine_values = pristine
        .map(|p| scaled_holding_powers(p, truth, [1.0]))
        .transpose()?;
    let optimized_values = scaled_holding_powers(g, truth, &alpha)?;

    // one shared binning so the histograms overlay
    let extent = slice_values
        .iter()
        .chain(pristine_values.iter())
        .chain(std::iter::once(&optimized_values))
        .flatten()
        .fold(0.0f64, |m, h| m.max(h.abs()));
    let extent = if extent > 0.0 { extent * (1.0 + 1e-9) } else { 1.0 };
    let bins = cfg.histogram_bins.max(1);
    let make = |values: Vec<f64>| {
        let h = Histogram::new(&values, -extent, extent, bins);
        HoldingReport::new(values, h)
    };
    let slice_reports: Vec<HoldingReport> = slice_values.into_iter().map(make).collect();
    let pristine_report = pristine_values.map(make);
    let optimized_report = make(optimized_values);

    let fractions: Vec<f64> = slice_reports.iter().map(|r| r.fraction_positive).collect();
    let perturbed_average = fractions.iter().sum::<f64>() / k as f64;
    let best_single = fractions.iter().copied().fold(f64::MIN, f64::max);

    let mut report = ExperimentReport::new(
        "recover",
        cfg.opt.seed,
        json!({
            "n_vertices": g.n_vertices(),
            "n_edges": g.n_edges(),
            "metrics": g.metric_names(),
            "config": cfg,
            "pristine": pristine.is_some(),
        }),
    );
    let s = &mut report.summary;
    s.insert("objective".into(), value);
    s.insert("fraction_positive_optimized".into(), optimized_report.fraction_positive);
    s.insert("fraction_positive_perturbed_average".into(), perturbed_average);
    s.insert("fraction_positive_best_single".into(), best_single);
    if let Some(p) = &pristine_report {
        s.insert("fraction_positive_ground_truth".into(), p.fraction_positive);
    }
    if let Some(o) = &optimization {
        s.insert("evaluations".into(), o.evaluations as f64);
        s.insert("converged".into(), f64::from(u8::from(o.converged)));
    }

    let mut alpha_table = Table::new("alpha", ["metric", "alpha_simplex", "alpha_max_norm"]);
    let max_norm = alpha.normalized(Normalization::MaxNorm);
    for (j, name) in g.metric_names().iter().enumerate() {
        alpha_table.push(vec![name.clone(), fmt_f64(alpha.coeffs()[j]), fmt_f64(max_norm[j])]);
    }
    let mut slices = Table::new("slices", ["metric", "fraction_positive", "fraction_negative"]);
    for (name, r) in g.metric_names().iter().zip(&slice_reports) {
        slices.push(vec![name.clone(), fmt_f64(r.fraction_positive), fmt_f64(r.fraction_negative())]);
    }
    let mut hist = Table::new("histogram", ["series", "bin_left", "bin_right", "count"]);
    let mut add_series = |label: &str, r: &HoldingReport| {
        for (l, rgt, c) in r.histogram.rows() {
            hist.push(vec![label.to_string(), fmt_f64(l), fmt_f64(rgt), c.to_string()]);
        }
    };
    // the first metric stands in for "a perturbed edge type"
    add_series("perturbed", &slice_reports[0]);
    if let Some(p) = &pristine_report {
        add_series("pristine", p);
    }
    add_series("optimized", &optimized_report);
    report.tables.extend([alpha_table, slices, hist]);
    if let Some(o) = &optimization {
        report.tables.push(trace_table("trace", "value", k, o));
    }

    Ok(RecoverOutcome {
        alpha,
        objective_value: value,
        slice_reports,
        pristine_report,
        optimized_report,
        perturbed_average,
        best_single,
        optimization,
        report,
    })
}

/// `eval, start, alpha_1..K, <value_column>` for every evaluation.
pub(crate) fn trace_table(name: &str, value_column: &str, k: usize, o: &OptResult) -> Table {
    let mut columns = vec!["eval".to_string(), "start".to_string()];
    columns.extend(alpha_columns(k));
    columns.push(value_column.to_string());
    let mut t = Table::new(name, columns);
    for tp in &o.trace {
        let mut row = vec![tp.eval.to_string(), tp.start.to_string()];
        row.extend(fmt_all(&tp.alpha));
        row.push(fmt_f64(tp.value));
        t.push(row);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_metric_skips_optimization() {
        let g = MultiGraph::from_edges(
            4,
            vec!["w".into()],
            [(0, 1, [1.0]), (2, 3, [1.0]), (1, 2, [0.2])],
        )
        .unwrap();
        let truth = Clustering::from_labels(&[0, 0, 1, 1]);
        let out = recover_weights(&g, &truth, None, &RecoverConfig::default()).unwrap();
        assert_eq!(out.alpha.coeffs(), &[1.0]);
        assert!(out.optimization.is_none());
        assert_eq!(out.optimized_report.fraction_positive, 1.0);
    }

    #[test]
    fn finds_the_informative_metric() {
        // metric 0 follows the clustering, metric 1 contradicts it
        let mut edges = Vec::new();
        for (u, v) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            edges.push((u, v, [1.0, 0.1]));
        }
        for (u, v) in [(0, 3), (1, 4), (2, 5)] {
            edges.push((u, v, [0.1, 2.0]));
        }
        let g = MultiGraph::from_edges(6, vec!["good".into(), "bad".into()], edges).unwrap();
        let truth = Clustering::from_labels(&[0, 0, 0, 1, 1, 1]);
        let out = recover_weights(&g, &truth, None, &RecoverConfig::default()).unwrap();
        assert_eq!(out.optimized_report.fraction_positive, 1.0);
        assert_eq!(out.slice_reports[1].fraction_positive, 0.0);
        assert!(out.alpha.coeffs()[0] > out.alpha.coeffs()[1]);
        assert!(out.report.table("trace").is_some());
    }
}
