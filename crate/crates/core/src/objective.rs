//! Objectives scoring how well an aggregation vector justifies a clustering.
//!
//! The *pull* of cluster `k` on vertex `v` is the composite weight of the
//! edges joining `v` to members of `k`. The *holding power* `H(v)` is the
//! pull of `v`'s own cluster minus the largest pull of any other cluster; a
//! positive value means `v` prefers where the clustering put it. The main
//! objective is `Σ_v arctan(β H(v))`, a smoothed count of vertices with
//! positive holding power.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Clustering, MultiGraph, WeightedView};
use crate::metrics::modularity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `Σ_v arctan(β H(v))`.
    ArctanHolding,
    /// Number of vertices with `H(v) > 0`.
    CountPositive,
    /// Negated total composite weight of cut edges (maximized).
    CutWeight,
    /// Weighted modularity of the clustering on the collapsed graph.
    ModularityQuality,
    /// `(1−λ)` normalized arctan objective plus `λ` modularity.
    Blend,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectiveConfig {
    pub beta: f64,
    pub variant: Variant,
    pub blend_lambda: f64,
    /// Rescale composite weights to unit mean before computing holding
    /// powers, which makes `beta` independent of the weight scale.
    pub prescale: bool,
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        ObjectiveConfig {
            beta: 1.0,
            variant: Variant::ArctanHolding,
            blend_lambda: 0.0,
            prescale: true,
        }
    }
}

impl ObjectiveConfig {
    pub fn arctan(beta: f64) -> Self {
        ObjectiveConfig {
            beta,
            ..Default::default()
        }
    }

    pub fn blend(beta: f64, lambda: f64) -> Self {
        ObjectiveConfig {
            beta,
            variant: Variant::Blend,
            blend_lambda: lambda,
            prescale: true,
        }
    }

    pub fn with_variant(self, variant: Variant) -> Self {
        ObjectiveConfig { variant, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "beta must be positive and finite, got {}",
                self.beta
            )));
        }
        if !(0.0..=1.0).contains(&self.blend_lambda) {
            return Err(Error::InvalidArgument(format!(
                "blend lambda must lie in [0, 1], got {}",
                self.blend_lambda
            )));
        }
        Ok(())
    }
}

/// Fixed-width histogram over `[lo, hi)`; values outside fall in the end bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(values: &[f64], lo: f64, hi: f64, bins: usize) -> Self {
        assert!(bins > 0 && hi > lo, "histogram needs bins > 0 and hi > lo");
        let mut counts = vec![0; bins];
        let width = (hi - lo) / bins as f64;
        for &x in values {
            let b = ((x - lo) / width).floor();
            let b = if b.is_nan() { 0.0 } else { b.clamp(0.0, (bins - 1) as f64) };
            counts[b as usize] += 1;
        }
        Histogram { lo, hi, counts }
    }

    /// A symmetric range around zero wide enough for every value.
    pub fn covering(values: &[f64], bins: usize) -> Self {
        let extent = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let extent = if extent > 0.0 { extent * (1.0 + 1e-9) } else { 1.0 };
        Histogram::new(values, -extent, extent, bins)
    }

    pub fn bin_edges(&self, bin: usize) -> (f64, f64) {
        let width = (self.hi - self.lo) / self.counts.len() as f64;
        (self.lo + bin as f64 * width, self.lo + (bin + 1) as f64 * width)
    }

    /// `(bin_left, bin_right, count)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, usize)> + '_ {
        self.counts.iter().enumerate().map(|(i, &c)| {
            let (l, r) = self.bin_edges(i);
            (l, r, c)
        })
    }
}

/// Per-vertex holding powers with summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoldingReport {
    pub values: Vec<f64>,
    pub fraction_positive: f64,
    pub histogram: Histogram,
}

impl HoldingReport {
    pub fn new(values: Vec<f64>, histogram: Histogram) -> Self {
        let fraction_positive = if values.is_empty() {
            0.0
        } else {
            count_positive_values(&values) as f64 / values.len() as f64
        };
        HoldingReport {
            values,
            fraction_positive,
            histogram,
        }
    }

    pub fn from_values(values: Vec<f64>, bins: usize) -> Self {
        let histogram = Histogram::covering(&values, bins);
        HoldingReport::new(values, histogram)
    }

    pub fn count_positive(&self) -> usize {
        count_positive_values(&self.values)
    }

    /// Fraction of vertices with strictly negative holding power.
    pub fn fraction_negative(&self) -> f64 {
        self.values.iter().filter(|&&h| h < 0.0).count() as f64 / self.values.len().max(1) as f64
    }
}

pub const DEFAULT_HISTOGRAM_BINS: usize = 40;

fn count_positive_values(values: &[f64]) -> usize {
    values.iter().filter(|&&h| h > 0.0).count()
}

fn check_inputs(g: &MultiGraph, c: &Clustering, alpha: &[f64]) -> Result<()> {
    g.check_dim(alpha.len())?;
    c.check_vertices(g.n_vertices())
}

/// Composite weight joining `v` to members of cluster `k`.
pub fn pull(
    g: &MultiGraph,
    v: usize,
    k: usize,
    c: &Clustering,
    alpha: impl AsRef<[f64]>,
) -> Result<f64> {
    let alpha = alpha.as_ref();
    check_inputs(g, c, alpha)?;
    Ok(g.neighbors(v)
        .iter()
        .filter(|a| c.label(a.neighbor as usize) == k)
        .map(|a| {
            g.edge_weights(a.edge as usize)
                .iter()
                .zip(alpha)
                .map(|(w, x)| w * x)
                .sum::<f64>()
        })
        .sum())
}

/// Own-cluster pull minus the largest foreign pull (0 when `v` touches no
/// other cluster).
pub fn holding_power(
    g: &MultiGraph,
    v: usize,
    c: &Clustering,
    alpha: impl AsRef<[f64]>,
) -> Result<f64> {
    let alpha = alpha.as_ref();
    check_inputs(g, c, alpha)?;
    let view = g.collapse(alpha)?;
    let mut scratch = PullScratch::new(c.n_clusters());
    Ok(scratch.holding(&view, c, v))
}

/// Holding power of every vertex, in raw composite-weight units.
pub fn holding_powers(g: &MultiGraph, c: &Clustering, alpha: impl AsRef<[f64]>) -> Result<Vec<f64>> {
    let alpha = alpha.as_ref();
    check_inputs(g, c, alpha)?;
    Ok(holding_powers_of_view(&g.collapse(alpha)?, c))
}

/// Holding powers after rescaling composite weights to unit mean.
pub fn scaled_holding_powers(
    g: &MultiGraph,
    c: &Clustering,
    alpha: impl AsRef<[f64]>,
) -> Result<Vec<f64>> {
    let alpha = alpha.as_ref();
    check_inputs(g, c, alpha)?;
    Ok(holding_powers_of_view(&unit_mean(g.collapse(alpha)?), c))
}

/// `H(v)` for every vertex of a single-weight view in one `O(|E|)` sweep.
pub fn holding_powers_of_view(view: &WeightedView<'_>, c: &Clustering) -> Vec<f64> {
    let mut scratch = PullScratch::new(c.n_clusters());
    (0..view.n_vertices())
        .map(|v| scratch.holding(view, c, v))
        .collect()
}

/// Rescales a view so its mean edge weight is one (identity if all zero).
pub fn unit_mean(view: WeightedView<'_>) -> WeightedView<'_> {
    let total = view.total_weight();
    if total > 0.0 && view.n_edges() > 0 {
        view.scaled(view.n_edges() as f64 / total)
    } else {
        view
    }
}

/// Dense per-cluster accumulator reset after each vertex.
struct PullScratch {
    pull: Vec<f64>,
    touched: Vec<usize>,
    mark: Vec<bool>,
}

impl PullScratch {
    fn new(n_clusters: usize) -> Self {
        PullScratch {
            pull: vec![0.0; n_clusters],
            touched: Vec::new(),
            mark: vec![false; n_clusters],
        }
    }

    fn holding(&mut self, view: &WeightedView<'_>, c: &Clustering, v: usize) -> f64 {
        for a in view.neighbors(v) {
            let k = c.label(a.neighbor as usize);
            if !self.mark[k] {
                self.mark[k] = true;
                self.touched.push(k);
            }
            self.pull[k] += view.weight(a.edge as usize);
        }
        let own = c.label(v);
        let mut foreign = 0.0f64;
        for &k in &self.touched {
            if k != own {
                foreign = foreign.max(self.pull[k]);
            }
        }
        let h = self.pull[own] - foreign;
        for &k in &self.touched {
            self.pull[k] = 0.0;
            self.mark[k] = false;
        }
        self.touched.clear();
        h
    }
}

/// Pairwise (tree) summation; the reduction order depends only on the length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// `Σ arctan(β h)` over the given holding powers.
pub fn arctan_sum(holding: &[f64], beta: f64) -> f64 {
    let terms: Vec<f64> = holding.iter().map(|h| (beta * h).atan()).collect();
    pairwise_sum(&terms)
}

pub fn arctan_objective(
    g: &MultiGraph,
    c: &Clustering,
    alpha: impl AsRef<[f64]>,
    cfg: &ObjectiveConfig,
) -> Result<f64> {
    cfg.validate()?;
    let h = if cfg.prescale {
        scaled_holding_powers(g, c, alpha)?
    } else {
        holding_powers(g, c, alpha)?
    };
    Ok(arctan_sum(&h, cfg.beta))
}

/// Number of vertices with strictly positive holding power, with the full
/// per-vertex report.
pub fn count_positive(
    g: &MultiGraph,
    c: &Clustering,
    alpha: impl AsRef<[f64]>,
) -> Result<(usize, HoldingReport)> {
    let report = HoldingReport::from_values(holding_powers(g, c, alpha)?, DEFAULT_HISTOGRAM_BINS);
    Ok((report.count_positive(), report))
}

/// Per-metric sums `S^k` of the weights on edges whose endpoints lie in
/// different clusters.
pub fn cut_slice_sums(g: &MultiGraph, c: &Clustering) -> Result<Vec<f64>> {
    c.check_vertices(g.n_vertices())?;
    let mut sums = vec![0.0; g.n_metrics()];
    for e in 0..g.n_edges() {
        let (u, v) = g.endpoints(e);
        if c.label(u) != c.label(v) {
            for (s, w) in sums.iter_mut().zip(g.edge_weights(e)) {
                *s += w;
            }
        }
    }
    Ok(sums)
}

/// `Σ_k α_k S^k`, the composite weight of the cut.
pub fn cut_weight_objective(
    g: &MultiGraph,
    c: &Clustering,
    alpha: impl AsRef<[f64]>,
) -> Result<f64> {
    let alpha = alpha.as_ref();
    check_inputs(g, c, alpha)?;
    Ok(cut_slice_sums(g, c)?
        .iter()
        .zip(alpha)
        .map(|(s, a)| s * a)
        .sum())
}

pub fn blended_objective(
    g: &MultiGraph,
    c: &Clustering,
    alpha: impl AsRef<[f64]>,
    cfg: &ObjectiveConfig,
) -> Result<f64> {
    Evaluator::new(g, c, cfg.with_variant(Variant::Blend))?.try_evaluate(alpha.as_ref())
}

/// Evaluates a configured objective for many aggregation vectors against a
/// fixed graph and clustering. Shareable across threads.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    graph: &'a MultiGraph,
    clustering: &'a Clustering,
    cfg: ObjectiveConfig,
    cut_sums: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(graph: &'a MultiGraph, clustering: &'a Clustering, cfg: ObjectiveConfig) -> Result<Self> {
        cfg.validate()?;
        clustering.check_vertices(graph.n_vertices())?;
        let cut_sums = cut_slice_sums(graph, clustering)?;
        Ok(Evaluator {
            graph,
            clustering,
            cfg,
            cut_sums,
        })
    }

    pub fn config(&self) -> &ObjectiveConfig {
        &self.cfg
    }

    pub fn try_evaluate(&self, alpha: &[f64]) -> Result<f64> {
        self.graph.check_dim(alpha.len())?;
        let view = || self.graph.collapse(alpha);
        let holding = || -> Result<Vec<f64>> {
            let v = view()?;
            let v = if self.cfg.prescale { unit_mean(v) } else { v };
            Ok(holding_powers_of_view(&v, self.clustering))
        };
        let quality = || -> Result<f64> {
            match modularity(&view()?, self.clustering) {
                Err(Error::ZeroWeight) => Ok(0.0),
                other => other,
            }
        };
        Ok(match self.cfg.variant {
            Variant::ArctanHolding => arctan_sum(&holding()?, self.cfg.beta),
            Variant::CountPositive => count_positive_values(&holding()?) as f64,
            Variant::CutWeight => -self.cut_sums.iter().zip(alpha).map(|(s, a)| s * a).sum::<f64>(),
            Variant::ModularityQuality => quality()?,
            Variant::Blend => {
                let lambda = self.cfg.blend_lambda;
                let n = self.graph.n_vertices().max(1) as f64;
                let justify = if lambda < 1.0 {
                    arctan_sum(&holding()?, self.cfg.beta) / (n * FRAC_PI_2)
                } else {
                    0.0
                };
                let q = if lambda > 0.0 { quality()? } else { 0.0 };
                (1.0 - lambda) * justify + lambda * q
            }
        })
    }

    /// Objective value; dimension errors surface as NaN so the optimizer
    /// aborts with the offending point.
    pub fn evaluate(&self, alpha: &[f64]) -> f64 {
        self.try_evaluate(alpha).unwrap_or(f64::NAN)
    }
}
