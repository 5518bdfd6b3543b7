use serde_json::json;

use super::recover::trace_table;
use super::report::{fmt_f64, ExperimentReport, Table};
use super::{optimize, OptParams};
use crate::clusterer::{cluster_with_alpha, ClustererConfig};
use crate::error::Result;
use crate::graph::{AlphaVector, Clustering, MultiGraph};
use crate::metrics::variation_of_information;
use crate::optimizer::OptResult;

#[derive(Debug, Clone)]
pub struct InverseOutcome {
    pub alpha: AlphaVector,
    /// Variation of information (nats) between the clustering found at
    /// `alpha` and the ground truth.
    pub vi: f64,
    /// VI at each single-metric vector `e_k`.
    pub basis_vi: Vec<f64>,
    pub optimization: OptResult,
    pub report: ExperimentReport,
}

/// Searches for the aggregation vector whose clustering is closest to
/// `truth` in variation of information.
///
/// Every evaluation runs the clusterer on the collapsed graph, so this is far
/// more expensive than [`super::recover_weights`]; `total_budget` caps the
/// number of clusterer runs across all starts. Every visited `(α, VI)` pair
/// lands in the `evaluations` table.
pub fn inverse_recover(
    g: &MultiGraph,
    truth: &Clustering,
    clusterer: &ClustererConfig,
    params: &OptParams,
    total_budget: Option<usize>,
) -> Result<InverseOutcome> {
    truth.check_vertices(g.n_vertices())?;
    let k = g.n_metrics();
    let vi_at = |alpha: &[f64]| -> Result<f64> {
        let found = cluster_with_alpha(g, alpha, clusterer)?;
        variation_of_information(&found, truth)
    };
    let basis_vi: Vec<f64> = (0..k)
        .map(|j| vi_at(AlphaVector::basis(k, j).coeffs()))
        .collect::<Result<_>>()?;

    let result = optimize(k, |a: &[f64]| vi_at(a).map_or(f64::NAN, |d| -d), params, total_budget)?;
    let alpha = AlphaVector::from_simplex_unchecked(result.best_alpha.clone());
    let vi = -result.best_value;

    let mut report = ExperimentReport::new(
        "inverse",
        params.seed,
        json!({
            "n_vertices": g.n_vertices(),
            "n_edges": g.n_edges(),
            "metrics": g.metric_names(),
            "clusterer": clusterer,
            "optimizer": params,
            "total_budget": total_budget,
        }),
    );
    let s = &mut report.summary;
    s.insert("vi".into(), vi);
    s.insert("evaluations".into(), result.evaluations as f64);
    s.insert("converged".into(), f64::from(u8::from(result.converged)));
    s.insert("basis_vi_min".into(), basis_vi.iter().copied().fold(f64::INFINITY, f64::min));
    s.insert("basis_vi_median".into(), median(&basis_vi));

    let mut basis = Table::new("basis", ["metric", "vi"]);
    for (name, d) in g.metric_names().iter().zip(&basis_vi) {
        basis.push(vec![name.clone(), fmt_f64(*d)]);
    }
    let mut evaluations = trace_table("evaluations", "vi", k, &result);
    let vi_col = evaluations.columns.len() - 1;
    for row in &mut evaluations.rows {
        // stored as −VI by the maximizer
        let v: f64 = row[vi_col].parse().expect("formatted float");
        row[vi_col] = fmt_f64(-v);
    }
    report.tables.extend([basis, evaluations]);

    Ok(InverseOutcome {
        alpha,
        vi,
        basis_vi,
        optimization: result,
        report,
    })
}

pub(crate) fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    match v.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => v[n / 2],
        n => 0.5 * (v[n / 2 - 1] + v[n / 2]),
    }
}
