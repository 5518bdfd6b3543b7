//! Forward solver: clusters a single-weight graph.
//!
//! `GreedyModularity` agglomerates communities by the largest weighted
//! modularity gain (Clauset-Newman-Moore style, with a lazily invalidated
//! heap), then refines with single-vertex moves that strictly increase
//! modularity. `LabelPropagation` is a cheaper weighted label propagation.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Clustering, MultiGraph, WeightedView};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GreedyModularity,
    LabelPropagation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClustererConfig {
    pub method: Method,
    /// Stop agglomeration at exactly this many clusters (greedy only).
    pub target_clusters: Option<usize>,
    /// Orders vertex visits in refinement and label propagation.
    pub seed: u64,
    pub max_passes: usize,
}

impl Default for ClustererConfig {
    fn default() -> Self {
        ClustererConfig {
            method: Method::GreedyModularity,
            target_clusters: None,
            seed: 0,
            max_passes: 20,
        }
    }
}

impl ClustererConfig {
    pub fn with_target(self, target: usize) -> Self {
        ClustererConfig {
            target_clusters: Some(target),
            ..self
        }
    }
}

pub fn cluster(g: &WeightedView<'_>, cfg: &ClustererConfig) -> Result<Clustering> {
    let n = g.n_vertices();
    if n == 0 {
        return Err(Error::InvalidGraph("cannot cluster an empty graph".into()));
    }
    if let Some(t) = cfg.target_clusters {
        if t == 0 || t > n {
            return Err(Error::InvalidArgument(format!(
                "target cluster count {t} must lie in 1..={n}"
            )));
        }
    }
    let m = g.total_weight();
    if !(m > 0.0) {
        return Err(Error::ZeroWeight);
    }
    let labels = match cfg.method {
        Method::GreedyModularity => {
            let mut labels = agglomerate(g, m, cfg.target_clusters);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            refine(g, m, &mut labels, cfg, &mut rng, cfg!(test));
            labels
        }
        Method::LabelPropagation => {
            if cfg.target_clusters.is_some() {
                return Err(Error::InvalidArgument(
                    "label propagation does not support a target cluster count".into(),
                ));
            }
            label_propagation(g, cfg)
        }
    };
    Ok(Clustering::from_labels(&labels))
}

/// `cluster(collapse(g, alpha), cfg)`.
pub fn cluster_with_alpha(
    g: &MultiGraph,
    alpha: impl AsRef<[f64]>,
    cfg: &ClustererConfig,
) -> Result<Clustering> {
    cluster(&g.collapse(alpha)?, cfg)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gain: f64,
    a: usize,
    b: usize,
    version_a: u32,
    version_b: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // max-heap: larger gain first, then the lowest (a, b) pair
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| (other.a, other.b).cmp(&(self.a, self.b)))
    }
}

fn agglomerate(g: &WeightedView<'_>, m: f64, target: Option<usize>) -> Vec<usize> {
    let n = g.n_vertices();
    let graph = g.graph();
    let mut links: Vec<HashMap<usize, f64>> = vec![HashMap::new(); n];
    for (e, &w) in g.weights().iter().enumerate() {
        let (u, v) = graph.endpoints(e);
        *links[u].entry(v).or_insert(0.0) += w;
        *links[v].entry(u).or_insert(0.0) += w;
    }
    let mut strength = g.strengths();
    let mut version = vec![0u32; n];
    let mut alive = vec![true; n];
    let mut parent: Vec<usize> = (0..n).collect();
    let mut count = n;
    let two_m_sq = 2.0 * m * m;

    let candidate = |a: usize, b: usize, w: f64, strength: &[f64], version: &[u32]| {
        let (a, b) = (a.min(b), a.max(b));
        Candidate {
            gain: w / m - strength[a] * strength[b] / two_m_sq,
            a,
            b,
            version_a: version[a],
            version_b: version[b],
        }
    };

    let mut heap = BinaryHeap::new();
    for (a, row) in links.iter().enumerate() {
        for (&b, &w) in row {
            if a < b {
                heap.push(candidate(a, b, w, &strength, &version));
            }
        }
    }

    let done = |count: usize| match target {
        Some(t) => count <= t,
        None => false,
    };

    while count > 1 && !done(count) {
        let next = loop {
            match heap.pop() {
                None => break None,
                Some(c) if alive[c.a] && alive[c.b] && version[c.a] == c.version_a && version[c.b] == c.version_b => {
                    break Some(c)
                }
                Some(_) => continue,
            }
        };
        let (a, b) = match next {
            Some(c) if c.gain > 0.0 || target.is_some() => (c.a, c.b),
            Some(_) => break,
            // no linked pairs left: only a target count forces further merges
            None if target.is_some() => {
                let mut weakest: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
                weakest.sort_by(|&x, &y| strength[x].total_cmp(&strength[y]).then(x.cmp(&y)));
                (weakest[0].min(weakest[1]), weakest[0].max(weakest[1]))
            }
            None => break,
        };

        // fold the smaller link map into the larger
        let (keep, gone) = if links[a].len() >= links[b].len() { (a, b) } else { (b, a) };
        let moved = std::mem::take(&mut links[gone]);
        links[keep].remove(&gone);
        for (l, w) in moved {
            if l == keep {
                continue;
            }
            *links[keep].entry(l).or_insert(0.0) += w;
            let row = &mut links[l];
            row.remove(&gone);
            *row.entry(keep).or_insert(0.0) += w;
        }
        strength[keep] += strength[gone];
        strength[gone] = 0.0;
        alive[gone] = false;
        parent[gone] = keep;
        version[keep] += 1;
        count -= 1;
        let mut fresh: Vec<(usize, f64)> = links[keep].iter().map(|(&l, &w)| (l, w)).collect();
        fresh.sort_unstable_by_key(|&(l, _)| l);
        for (l, w) in fresh {
            heap.push(candidate(keep, l, w, &strength, &version));
        }
    }

    (0..n)
        .map(|v| {
            let mut r = v;
            while parent[r] != r {
                r = parent[r];
            }
            r
        })
        .collect()
}

/// Local moving: each vertex jumps to the neighboring community with the
/// largest strictly positive modularity gain.
fn refine(
    g: &WeightedView<'_>,
    m: f64,
    labels: &mut [usize],
    cfg: &ClustererConfig,
    rng: &mut ChaCha8Rng,
    check_moves: bool,
) {
    const MIN_GAIN: f64 = 1e-13;
    let n = g.n_vertices();
    let degree = g.strengths();
    let mut strength = vec![0.0; n];
    let mut size = vec![0usize; n];
    for v in 0..n {
        strength[labels[v]] += degree[v];
        size[labels[v]] += 1;
    }
    let mut link = vec![0.0; n];
    let mut mark = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let two_m_sq = 2.0 * m * m;

    for _ in 0..cfg.max_passes {
        order.shuffle(rng);
        let mut moves = 0;
        for &v in &order {
            let own = labels[v];
            if cfg.target_clusters.is_some() && size[own] == 1 {
                continue;
            }
            for a in g.neighbors(v) {
                let c = labels[a.neighbor as usize];
                if !mark[c] {
                    mark[c] = true;
                    touched.push(c);
                }
                link[c] += g.weight(a.edge as usize);
            }
            let d = degree[v];
            let base_own = strength[own] - d;
            let mut best: Option<(f64, usize)> = None;
            for &c in &touched {
                if c == own {
                    continue;
                }
                let gain = (link[c] - link[own]) / m - d * (strength[c] - base_own) / two_m_sq;
                if gain > MIN_GAIN && best.is_none_or(|(bg, bc)| gain > bg || (gain == bg && c < bc)) {
                    best = Some((gain, c));
                }
            }
            for &c in &touched {
                link[c] = 0.0;
                mark[c] = false;
            }
            touched.clear();
            if let Some((gain, to)) = best {
                let before = if check_moves { Some(labelled_modularity(g, m, labels)) } else { None };
                labels[v] = to;
                strength[own] -= d;
                strength[to] += d;
                size[own] -= 1;
                size[to] += 1;
                moves += 1;
                if let Some(before) = before {
                    let after = labelled_modularity(g, m, labels);
                    assert!(after > before, "vertex move lowered modularity");
                    assert!((after - before - gain).abs() < 1e-9);
                }
            }
        }
        if moves == 0 {
            break;
        }
    }
}

fn labelled_modularity(g: &WeightedView<'_>, m: f64, labels: &[usize]) -> f64 {
    let n = g.n_vertices();
    let mut internal = vec![0.0; n];
    let mut strength = vec![0.0; n];
    for (e, &w) in g.weights().iter().enumerate() {
        let (u, v) = g.graph().endpoints(e);
        if labels[u] == labels[v] {
            internal[labels[u]] += w;
        }
        strength[labels[u]] += w;
        strength[labels[v]] += w;
    }
    internal
        .iter()
        .zip(&strength)
        .map(|(i, d)| i / m - (d / (2.0 * m)).powi(2))
        .sum()
}

fn label_propagation(g: &WeightedView<'_>, cfg: &ClustererConfig) -> Vec<usize> {
    let n = g.n_vertices();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut score = vec![0.0; n];
    let mut mark = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    for _ in 0..cfg.max_passes {
        order.shuffle(&mut rng);
        let mut changed = 0;
        for &v in &order {
            for a in g.neighbors(v) {
                let l = labels[a.neighbor as usize];
                if !mark[l] {
                    mark[l] = true;
                    touched.push(l);
                }
                score[l] += g.weight(a.edge as usize);
            }
            let current = labels[v];
            let mut best = (score[current], current);
            for &l in &touched {
                if score[l] > best.0 || (score[l] == best.0 && l < best.1 && best.1 != current) {
                    best = (score[l], l);
                }
            }
            for &l in &touched {
                score[l] = 0.0;
                mark[l] = false;
            }
            touched.clear();
            if best.1 != current && best.0 > 0.0 {
                labels[v] = best.1;
                changed += 1;
            }
        }
        if changed == 0 {
            break;
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::modularity;

    fn unit_graph(n: usize, edges: &[(usize, usize)]) -> MultiGraph {
        MultiGraph::from_edges(n, vec!["w".into()], edges.iter().map(|&(u, v)| (u, v, [1.0])))
            .unwrap()
    }

    #[test]
    fn two_triangles_split_into_components() {
        let g = unit_graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let view = g.slice_view(0);
        let c = cluster(&view, &ClustererConfig::default()).unwrap();
        assert_eq!(c.labels(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(modularity(&view, &c).unwrap(), 0.5);
    }

    #[test]
    fn single_edge_becomes_one_cluster() {
        let g = unit_graph(2, &[(0, 1)]);
        let c = cluster(&g.slice_view(0), &ClustererConfig::default()).unwrap();
        assert_eq!(c.n_clusters(), 1);
    }

    #[test]
    fn target_count_is_exact() {
        let g = unit_graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let view = g.slice_view(0);
        for t in 1..=6 {
            let c = cluster(&view, &ClustererConfig::default().with_target(t)).unwrap();
            assert_eq!(c.n_clusters(), t, "target {t}");
        }
        assert!(cluster(&view, &ClustererConfig::default().with_target(0)).is_err());
        assert!(cluster(&view, &ClustererConfig::default().with_target(7)).is_err());
    }

    #[test]
    fn empty_and_weightless_graphs_rejected() {
        let g = unit_graph(0, &[]);
        assert!(cluster(&g.slice_view(0), &ClustererConfig::default()).is_err());
        let g = MultiGraph::from_edges(2, vec!["w".into()], [(0, 1, [0.0])]).unwrap();
        assert!(matches!(
            cluster(&g.slice_view(0), &ClustererConfig::default()),
            Err(Error::ZeroWeight)
        ));
    }

    #[test]
    fn label_propagation_finds_cliques() {
        let mut edges = Vec::new();
        for base in [0, 5] {
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((4, 5));
        let g = unit_graph(10, &edges);
        let cfg = ClustererConfig {
            method: Method::LabelPropagation,
            ..Default::default()
        };
        let c = cluster(&g.slice_view(0), &cfg).unwrap();
        assert_eq!(c.n_clusters(), 2);
        assert!(cluster(&g.slice_view(0), &cfg.with_target(2)).is_err());
    }
}
