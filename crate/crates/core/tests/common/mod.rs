//! Brute-force reference implementations and random instance builders shared
//! by the integration tests. Nothing here calls into the code under test
//! except to construct inputs.

#![allow(dead_code)]

use edgeblend::{Clustering, MultiGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Edge list with one weight vector per edge, independent of `MultiGraph`.
#[derive(Debug, Clone)]
pub struct RawGraph {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<(usize, usize, Vec<f64>)>,
}

impl RawGraph {
    pub fn build(&self) -> MultiGraph {
        let names = (0..self.k).map(|i| format!("m{i}")).collect();
        MultiGraph::from_edges(self.n, names, self.edges.iter().map(|(u, v, w)| (*u, *v, w.clone())))
            .unwrap()
    }

    fn composite(&self, w: &[f64], alpha: &[f64]) -> f64 {
        w.iter().zip(alpha).map(|(a, b)| a * b).sum()
    }

    /// Dense symmetric composite adjacency matrix.
    pub fn dense(&self, alpha: &[f64]) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for (u, v, w) in &self.edges {
            let x = self.composite(w, alpha);
            a[*u][*v] += x;
            a[*v][*u] += x;
        }
        a
    }
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, k: usize, density: f64) -> RawGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                let w = (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
                edges.push((u, v, w));
            }
        }
    }
    RawGraph { n, k, edges }
}

pub fn random_labels(rng: &mut ChaCha8Rng, n: usize, max_clusters: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..max_clusters)).collect()
}

pub fn random_alpha(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let x: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = x.iter().sum();
    x.iter().map(|v| v / s).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Pull of the cluster labelled `label` on `v`, by scanning a dense row.
pub fn pull(g: &RawGraph, alpha: &[f64], labels: &[usize], v: usize, label: usize) -> f64 {
    let a = g.dense(alpha);
    (0..g.n).filter(|&u| u != v && labels[u] == label).map(|u| a[v][u]).sum()
}

/// Own pull minus the largest pull of a different cluster that `v` is
/// adjacent to (0 when there is none).
pub fn holding(g: &RawGraph, alpha: &[f64], labels: &[usize], v: usize) -> f64 {
    let a = g.dense(alpha);
    let own = pull(g, alpha, labels, v, labels[v]);
    let mut best_foreign = 0.0f64;
    let mut distinct: Vec<usize> = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for &l in &distinct {
        if l == labels[v] {
            continue;
        }
        let adjacent = (0..g.n).any(|u| labels[u] == l && g.edges.iter().any(|(x, y, _)| (*x == v && *y == u) || (*y == v && *x == u)));
        if adjacent {
            let p: f64 = (0..g.n).filter(|&u| labels[u] == l).map(|u| a[v][u]).sum();
            best_foreign = best_foreign.max(p);
        }
    }
    own - best_foreign
}

/// Newman's pairwise form `(1/2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j)`.
pub fn modularity(g: &RawGraph, alpha: &[f64], labels: &[usize]) -> f64 {
    let a = g.dense(alpha);
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..g.n {
        for j in 0..g.n {
            if labels[i] == labels[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// `H(A|B) + H(B|A)` from explicit joint probabilities over label values.
pub fn vi(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let la = *a.iter().max().unwrap() + 1;
    let lb = *b.iter().max().unwrap() + 1;
    let mut joint = vec![vec![0.0; lb]; la];
    for (&x, &y) in a.iter().zip(b) {
        joint[x][y] += 1.0 / n;
    }
    let pa: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let pb: Vec<f64> = (0..lb).map(|j| joint.iter().map(|r| r[j]).sum()).collect();
    let mut d = 0.0;
    for i in 0..la {
        for j in 0..lb {
            let p = joint[i][j];
            if p > 0.0 {
                d -= p * (p / pa[i]).ln() + p * (p / pb[j]).ln();
            }
        }
    }
    d
}

/// Every set partition of `0..n` as canonical label vectors.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<usize>, next: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=next {
            cur.push(l);
            rec(i + 1, n, cur, next.max(l + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), 0, &mut out);
    out
}

pub fn clustering(labels: &[usize]) -> Clustering {
    Clustering::from_labels(labels)
}
