//! Planted-partition benchmarks with multiple noisy weight metrics.
//!
//! A simplified LFR-style generator: cluster sizes are uniform within
//! bounds, every vertex gets close to `(1−μ_t)·d` intra-cluster and `μ_t·d`
//! inter-cluster edges, and inter-cluster edges are weighted so that a
//! fraction `μ_w` of the total strength is external. Each of the `K` metric
//! copies is then perturbed independently with `w ← ν(w + σ)`, `σ` uniform
//! on `(−a·w̄, a·w̄)` and `ν` uniform on `(ν_lo, ν_hi)`, clamped at zero.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Clustering, MultiGraph, MultiGraphBuilder};

/// Additive/multiplicative noise applied to every metric copy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseParams {
    /// `σ` is drawn from `(−add_factor·w̄, add_factor·w̄)`.
    pub add_factor: f64,
    pub mult_lo: f64,
    pub mult_hi: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams {
            add_factor: 2.0,
            mult_lo: 0.0,
            mult_hi: 1.0,
        }
    }
}

impl NoiseParams {
    /// `σ ≡ 0`, `ν ≡ 1`.
    pub fn none() -> Self {
        NoiseParams {
            add_factor: 0.0,
            mult_lo: 1.0,
            mult_hi: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.add_factor >= 0.0) || !(self.mult_lo <= self.mult_hi) || !(self.mult_lo >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "invalid noise parameters {self:?}"
            )));
        }
        Ok(())
    }
}

pub const DEFAULT_MIN_CLUSTER: usize = 16;
pub const DEFAULT_MAX_CLUSTER: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSpec {
    pub n: usize,
    pub avg_degree: f64,
    /// Fraction of each vertex's edges that leave its cluster.
    pub mu_t: f64,
    /// Fraction of each vertex's strength carried by external edges.
    pub mu_w: f64,
    /// Number of perturbed metric copies.
    pub k: usize,
    pub noise: NoiseParams,
    pub min_cluster: usize,
    pub max_cluster: usize,
    pub seed: u64,
}

impl BenchSpec {
    /// Degree 30, `μ_t = 0.7`, `μ_w = 0.75`, default noise, cluster sizes in
    /// `[16, 50]` (about `n/33` clusters at any size).
    pub fn standard(n: usize, k: usize, seed: u64) -> Self {
        BenchSpec {
            n,
            avg_degree: 30.0,
            mu_t: 0.7,
            mu_w: 0.75,
            k,
            noise: NoiseParams::default(),
            min_cluster: DEFAULT_MIN_CLUSTER.min(n),
            max_cluster: DEFAULT_MAX_CLUSTER.min(n),
            seed,
        }
    }

    fn intra_degree(&self) -> f64 {
        (1.0 - self.mu_t) * self.avg_degree
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(0.0..=1.0).contains(&self.mu_t) || !(0.0..=1.0).contains(&self.mu_w) {
            return bad("mixing parameters must lie in [0, 1]".into());
        }
        if self.n < 2 || self.k == 0 {
            return bad("need at least 2 vertices and 1 metric".into());
        }
        if !(self.avg_degree > 0.0) || self.avg_degree >= self.n as f64 {
            return bad(format!("average degree must lie in (0, n), got {}", self.avg_degree));
        }
        if self.min_cluster == 0 || self.min_cluster > self.max_cluster || self.min_cluster > self.n {
            return bad(format!(
                "cluster size bounds [{}, {}] infeasible for n = {}",
                self.min_cluster, self.max_cluster, self.n
            ));
        }
        if self.intra_degree().ceil() as usize >= self.min_cluster {
            return bad(format!(
                "intra-cluster degree {:.1} does not fit clusters of size {}",
                self.intra_degree(),
                self.min_cluster
            ));
        }
        if self.mu_t > 0.0 && self.max_cluster >= self.n {
            return bad("inter-cluster edges need more than one cluster".into());
        }
        self.noise.validate()
    }
}

/// A generated instance.
#[derive(Debug, Clone)]
pub struct Benchmark {
    /// `K` perturbed copies of the pristine weights.
    pub graph: MultiGraph,
    pub planted: Clustering,
    /// Single-metric graph before noise.
    pub pristine: MultiGraph,
}

pub fn generate(spec: &BenchSpec) -> Result<Benchmark> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sizes = cluster_sizes(spec, &mut rng)?;
    let mut labels = Vec::with_capacity(spec.n);
    for (c, &s) in sizes.iter().enumerate() {
        labels.extend(std::iter::repeat_n(c, s));
    }
    labels.shuffle(&mut rng);
    let planted = Clustering::from_labels(&labels);
    let members = planted.members();

    let k_in = spec.intra_degree();
    let k_out = spec.mu_t * spec.avg_degree;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut present = std::collections::HashSet::new();

    for group in &members {
        let stubs: Vec<usize> = group
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, randomized_round(k_in, &mut rng)))
            .collect();
        pair_stubs(stubs, &mut rng, &mut present, &mut pairs, |_, _| true);
    }
    let intra_edges = pairs.len();
    let stubs: Vec<usize> = (0..spec.n)
        .flat_map(|v| std::iter::repeat_n(v, randomized_round(k_out, &mut rng)))
        .collect();
    pair_stubs(stubs, &mut rng, &mut present, &mut pairs, |u, v| {
        labels[u] != labels[v]
    });
    let inter_edges = pairs.len() - intra_edges;

    // external share of total strength = μ_w
    let (w_in, w_out) = if spec.mu_w >= 1.0 || intra_edges == 0 {
        (0.0, 1.0)
    } else if inter_edges == 0 {
        (1.0, 0.0)
    } else {
        let ratio = spec.mu_w * intra_edges as f64 / ((1.0 - spec.mu_w) * inter_edges as f64);
        (1.0, ratio)
    };

    let mut b = MultiGraphBuilder::new(spec.n, vec!["pristine".into()]);
    for &(u, v) in &pairs {
        let w = if labels[u] == labels[v] { w_in } else { w_out };
        b.add_edge(u, v, &[w])?;
    }
    let pristine = b.build()?;
    let graph = perturb_with(&pristine, spec.k, &spec.noise, &mut rng)?;
    Ok(Benchmark {
        graph,
        planted,
        pristine,
    })
}

fn randomized_round(x: f64, rng: &mut impl Rng) -> usize {
    let base = x.floor();
    base as usize + usize::from(rng.random::<f64>() < x - base)
}

fn cluster_sizes(spec: &BenchSpec, rng: &mut impl Rng) -> Result<Vec<usize>> {
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < spec.n {
        let s = rng.random_range(spec.min_cluster..=spec.max_cluster);
        sizes.push(s);
        total += s;
    }
    // trim the overshoot from the back, never below the lower bound
    for s in sizes.iter_mut().rev() {
        let cut = (total - spec.n).min(*s - spec.min_cluster);
        *s -= cut;
        total -= cut;
    }
    if total > spec.n {
        // all clusters at the minimum: drop the last and spread its vertices
        let last = sizes.pop().expect("nonempty");
        let mut deficit = spec.n - (total - last);
        let mut i = 0;
        let mut stalled = 0;
        while deficit > 0 {
            if sizes.is_empty() || stalled == sizes.len() {
                return Err(Error::InvalidArgument(format!(
                    "no partition of {} vertices into clusters of size [{}, {}]",
                    spec.n, spec.min_cluster, spec.max_cluster
                )));
            }
            let j = i % sizes.len();
            if sizes[j] < spec.max_cluster {
                sizes[j] += 1;
                deficit -= 1;
                stalled = 0;
            } else {
                stalled += 1;
            }
            i += 1;
        }
    }
    debug_assert_eq!(sizes.iter().sum::<usize>(), spec.n);
    if spec.mu_t > 0.0 && sizes.len() < 2 {
        return Err(Error::InvalidArgument(
            "cluster size bounds leave a single cluster; inter-cluster edges impossible".into(),
        ));
    }
    Ok(sizes)
}

/// Configuration-model pairing with a few reshuffling rounds for rejected
/// pairs (self-loops, duplicates, or pairs failing `allowed`); stubs still
/// unmatched afterwards are dropped.
fn pair_stubs(
    mut stubs: Vec<usize>,
    rng: &mut impl Rng,
    present: &mut std::collections::HashSet<(usize, usize)>,
    pairs: &mut Vec<(usize, usize)>,
    allowed: impl Fn(usize, usize) -> bool,
) {
    const ROUNDS: usize = 20;
    for _ in 0..ROUNDS {
        if stubs.len() < 2 {
            break;
        }
        stubs.shuffle(rng);
        let mut rejected = Vec::new();
        let mut it = stubs.chunks_exact(2);
        for pair in &mut it {
            let (u, v) = (pair[0], pair[1]);
            let key = (u.min(v), u.max(v));
            if u != v && allowed(u, v) && present.insert(key) {
                pairs.push((u, v));
            } else {
                rejected.extend_from_slice(pair);
            }
        }
        rejected.extend_from_slice(it.remainder());
        stubs = rejected;
    }
}

/// Turns a single-metric graph into a `k`-metric one by independent noise.
pub fn perturb(g: &MultiGraph, k: usize, noise: &NoiseParams, seed: u64) -> Result<MultiGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    perturb_with(g, k, noise, &mut rng)
}

fn perturb_with(g: &MultiGraph, k: usize, noise: &NoiseParams, rng: &mut impl Rng) -> Result<MultiGraph> {
    if g.n_metrics() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: g.n_metrics(),
        });
    }
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one metric copy".into()));
    }
    noise.validate()?;
    let base = g.metric_slice(0);
    let mean = if base.is_empty() {
        0.0
    } else {
        base.iter().sum::<f64>() / base.len() as f64
    };
    let spread = noise.add_factor * mean;
    let mut weights = Vec::with_capacity(base.len() * k);
    for &w in &base {
        for _ in 0..k {
            let sigma = uniform(rng, -spread, spread);
            let nu = uniform(rng, noise.mult_lo, noise.mult_hi);
            weights.push((nu * (w + sigma)).max(0.0));
        }
    }
    let names = (1..=k).map(|i| format!("m{i}")).collect();
    g.with_metrics(names, weights)
}

fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if lo < hi {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}
