//! Multi-weight graphs, aggregation vectors and clusterings.
//!
//! Every edge of a [`MultiGraph`] carries `K` nonnegative metric weights. An
//! [`AlphaVector`] collapses them into one composite weight per edge,
//! `w(α) = Σ_j α_j w^j`, giving a [`WeightedView`] that single-weight
//! algorithms (modularity, the clusterer) consume.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// One entry of a vertex's adjacency row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Adjacent {
    pub neighbor: u32,
    pub edge: u32,
}

/// Undirected simple graph whose edges carry `K` metric weights each.
///
/// Immutable once built; construct it through [`MultiGraphBuilder`].
#[derive(Debug, Clone, PartialEq)]
pub struct MultiGraph {
    n_vertices: usize,
    metric_names: Vec<String>,
    endpoints: Vec<(u32, u32)>,
    // edge-major, `metric_names.len()` entries per edge
    weights: Vec<f64>,
    offsets: Vec<usize>,
    adjacency: Vec<Adjacent>,
}

impl MultiGraph {
    pub fn builder(n_vertices: usize, metric_names: Vec<String>) -> MultiGraphBuilder {
        MultiGraphBuilder::new(n_vertices, metric_names)
    }

    /// Builds a graph from `(u, v, weights)` triples.
    pub fn from_edges<I, W>(n_vertices: usize, metric_names: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, W)>,
        W: AsRef<[f64]>,
    {
        let mut b = MultiGraphBuilder::new(n_vertices, metric_names);
        for (u, v, w) in edges {
            b.add_edge(u, v, w.as_ref())?;
        }
        b.build()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.endpoints.len()
    }

    /// Number of metrics `K` carried by each edge.
    pub fn n_metrics(&self) -> usize {
        self.metric_names.len()
    }

    pub fn metric_names(&self) -> &[String] {
        &self.metric_names
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        let (u, v) = self.endpoints[edge];
        (u as usize, v as usize)
    }

    pub fn edge_weights(&self, edge: usize) -> &[f64] {
        let k = self.n_metrics();
        &self.weights[edge * k..(edge + 1) * k]
    }

    pub fn neighbors(&self, v: usize) -> &[Adjacent] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Weights of metric `k` for every edge, in edge order.
    pub fn metric_slice(&self, k: usize) -> Vec<f64> {
        let stride = self.n_metrics();
        self.weights.iter().skip(k).step_by(stride).copied().collect()
    }

    /// Composite weight `Σ_j coeffs_j · w_edge^j`.
    ///
    /// `coeffs` may be an [`AlphaVector`] or any raw coefficient slice; the
    /// map is linear in the coefficients.
    pub fn composite_weight(&self, edge: usize, coeffs: impl AsRef<[f64]>) -> Result<f64> {
        let coeffs = coeffs.as_ref();
        self.check_dim(coeffs.len())?;
        if edge >= self.n_edges() {
            return Err(Error::InvalidArgument(format!(
                "edge index {edge} out of range (graph has {} edges)",
                self.n_edges()
            )));
        }
        Ok(dot(self.edge_weights(edge), coeffs))
    }

    /// Composite weights of every edge. Panics if `coeffs.len() != K`.
    pub(crate) fn composite_weights(&self, coeffs: &[f64]) -> Vec<f64> {
        assert_eq!(coeffs.len(), self.n_metrics());
        self.weights
            .chunks_exact(self.n_metrics())
            .map(|w| dot(w, coeffs))
            .collect()
    }

    /// Collapses the metrics into one composite weight per edge.
    pub fn collapse(&self, alpha: impl AsRef<[f64]>) -> Result<WeightedView<'_>> {
        let coeffs = alpha.as_ref();
        self.check_dim(coeffs.len())?;
        Ok(WeightedView {
            graph: self,
            weights: self.composite_weights(coeffs),
        })
    }

    /// View carrying metric `k` unchanged.
    pub fn slice_view(&self, k: usize) -> WeightedView<'_> {
        WeightedView {
            graph: self,
            weights: self.metric_slice(k),
        }
    }

    /// Same topology with a new set of metrics (`weights` edge-major).
    pub fn with_metrics(&self, metric_names: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        let k = metric_names.len();
        if k == 0 {
            return Err(Error::InvalidGraph("at least one metric is required".into()));
        }
        if weights.len() != k * self.n_edges() {
            return Err(Error::InvalidGraph(format!(
                "expected {} weights for {} edges x {k} metrics, got {}",
                k * self.n_edges(),
                self.n_edges(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidGraph(format!(
                "edge weights must be finite and nonnegative, found {w}"
            )));
        }
        Ok(MultiGraph {
            n_vertices: self.n_vertices,
            metric_names,
            endpoints: self.endpoints.clone(),
            weights,
            offsets: self.offsets.clone(),
            adjacency: self.adjacency.clone(),
        })
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.n_metrics() {
            return Err(Error::DimensionMismatch {
                expected: self.n_metrics(),
                got,
            });
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Incremental constructor enforcing the graph invariants.
#[derive(Debug)]
pub struct MultiGraphBuilder {
    n_vertices: usize,
    metric_names: Vec<String>,
    endpoints: Vec<(u32, u32)>,
    weights: Vec<f64>,
    seen: HashSet<(u32, u32)>,
}

impl MultiGraphBuilder {
    pub fn new(n_vertices: usize, metric_names: Vec<String>) -> Self {
        MultiGraphBuilder {
            n_vertices,
            metric_names,
            endpoints: Vec::new(),
            weights: Vec::new(),
            seen: HashSet::new(),
        }
    }

    /// Grows the vertex count to at least `n`.
    pub fn ensure_vertices(&mut self, n: usize) {
        self.n_vertices = self.n_vertices.max(n);
    }

    /// Adds an undirected edge and returns its index.
    pub fn add_edge(&mut self, u: usize, v: usize, weights: &[f64]) -> Result<usize> {
        if weights.len() != self.metric_names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.metric_names.len(),
                got: weights.len(),
            });
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
        }
        if u >= self.n_vertices || v >= self.n_vertices {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) references a vertex outside 0..{}",
                self.n_vertices
            )));
        }
        if u > u32::MAX as usize || v > u32::MAX as usize {
            return Err(Error::InvalidGraph("vertex id exceeds u32 range".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) has weight {w}; weights must be finite and nonnegative"
            )));
        }
        let key = (u.min(v) as u32, u.max(v) as u32);
        if !self.seen.insert(key) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
        }
        self.endpoints.push((u as u32, v as u32));
        self.weights.extend_from_slice(weights);
        Ok(self.endpoints.len() - 1)
    }

    pub fn build(self) -> Result<MultiGraph> {
        if self.metric_names.is_empty() {
            return Err(Error::InvalidGraph("at least one metric is required".into()));
        }
        let n = self.n_vertices;
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &self.endpoints {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut adjacency = vec![
            Adjacent {
                neighbor: 0,
                edge: 0
            };
            2 * self.endpoints.len()
        ];
        for (e, &(u, v)) in self.endpoints.iter().enumerate() {
            adjacency[cursor[u as usize]] = Adjacent {
                neighbor: v,
                edge: e as u32,
            };
            cursor[u as usize] += 1;
            adjacency[cursor[v as usize]] = Adjacent {
                neighbor: u,
                edge: e as u32,
            };
            cursor[v as usize] += 1;
        }
        Ok(MultiGraph {
            n_vertices: n,
            metric_names: self.metric_names,
            endpoints: self.endpoints,
            weights: self.weights,
            offsets,
            adjacency,
        })
    }
}

/// How an [`AlphaVector`] is scaled for presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Nonnegative, sums to one. The internal representation.
    Simplex,
    /// Nonnegative, largest coefficient is one. Used for reporting.
    MaxNorm,
}

/// Aggregation coefficients, stored on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaVector {
    coeffs: Vec<f64>,
}

impl AlphaVector {
    /// Normalizes nonnegative coefficients onto the simplex.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidAlpha("alpha must have at least one component".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidAlpha(format!(
                "components must be finite and nonnegative: {coeffs:?}"
            )));
        }
        let sum: f64 = coeffs.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidAlpha("components sum to zero".into()));
        }
        Ok(AlphaVector {
            coeffs: coeffs.into_iter().map(|c| c / sum).collect(),
        })
    }

    /// Wraps coefficients already on the simplex without renormalizing.
    pub(crate) fn from_simplex_unchecked(coeffs: Vec<f64>) -> Self {
        debug_assert!((coeffs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        AlphaVector { coeffs }
    }

    pub fn uniform(k: usize) -> Self {
        AlphaVector {
            coeffs: vec![1.0 / k as f64; k],
        }
    }

    /// The basis vector selecting metric `j`.
    pub fn basis(k: usize, j: usize) -> Self {
        let mut coeffs = vec![0.0; k];
        coeffs[j] = 1.0;
        AlphaVector { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn normalized(&self, norm: Normalization) -> Vec<f64> {
        match norm {
            Normalization::Simplex => self.coeffs.clone(),
            Normalization::MaxNorm => {
                let max = self.coeffs.iter().copied().fold(0.0, f64::max);
                self.coeffs.iter().map(|c| c / max).collect()
            }
        }
    }
}

impl AsRef<[f64]> for AlphaVector {
    fn as_ref(&self) -> &[f64] {
        &self.coeffs
    }
}

/// A composite single-weight graph sharing topology with its source.
#[derive(Debug, Clone)]
pub struct WeightedView<'g> {
    graph: &'g MultiGraph,
    weights: Vec<f64>,
}

impl<'g> WeightedView<'g> {
    /// Pairs a graph with explicit per-edge weights.
    pub fn from_weights(graph: &'g MultiGraph, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != graph.n_edges() {
            return Err(Error::InvalidArgument(format!(
                "expected {} edge weights, got {}",
                graph.n_edges(),
                weights.len()
            )));
        }
        Ok(WeightedView { graph, weights })
    }

    pub fn graph(&self) -> &'g MultiGraph {
        self.graph
    }

    pub fn n_vertices(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn n_edges(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, edge: usize) -> f64 {
        self.weights[edge]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn neighbors(&self, v: usize) -> &'g [Adjacent] {
        self.graph.neighbors(v)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Weighted degree of every vertex.
    pub fn strengths(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n_vertices()];
        for (e, w) in self.weights.iter().enumerate() {
            let (u, v) = self.graph.endpoints(e);
            d[u] += w;
            d[v] += w;
        }
        d
    }

    /// Multiplies every weight by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        WeightedView {
            graph: self.graph,
            weights: self.weights.iter().map(|w| w * factor).collect(),
        }
    }
}

/// A partition of `0..n` into `n_clusters` nonempty clusters with dense labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clustering {
    labels: Vec<usize>,
    n_clusters: usize,
}

impl Clustering {
    /// Compacts arbitrary labels to `0..n_clusters` in order of first
    /// appearance along the vertex order.
    ///
    /// Two clusterings describe the same partition iff their compacted
    /// labels are equal.
    pub fn from_labels<L: Eq + std::hash::Hash + Clone>(raw: &[L]) -> Self {
        let mut map = std::collections::HashMap::with_capacity(raw.len());
        let labels = raw
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(l.clone()).or_insert(next)
            })
            .collect();
        Clustering {
            labels,
            n_clusters: map.len(),
        }
    }

    pub fn all_in_one(n: usize) -> Self {
        Clustering {
            labels: vec![0; n],
            n_clusters: usize::from(n > 0),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Clustering {
            labels: (0..n).collect(),
            n_clusters: n,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_clusters];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Vertex lists per cluster, in label order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.n_clusters];
        for (v, &l) in self.labels.iter().enumerate() {
            members[l].push(v);
        }
        members
    }

    pub(crate) fn check_vertices(&self, n: usize) -> Result<()> {
        if self.n_vertices() != n {
            return Err(Error::InvalidClustering(format!(
                "clustering covers {} vertices, graph has {n}",
                self.n_vertices()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("m{i}")).collect()
    }

    #[test]
    fn composite_weight_examples() {
        let g = MultiGraph::from_edges(2, names(2), [(0, 1, [1.0, 3.0])]).unwrap();
        assert_eq!(g.composite_weight(0, [0.5, 0.5]).unwrap(), 2.0);
        let g = MultiGraph::from_edges(2, names(2), [(0, 1, [4.0, 7.0])]).unwrap();
        assert_eq!(g.composite_weight(0, AlphaVector::basis(2, 0)).unwrap(), 4.0);
        let g = MultiGraph::from_edges(2, names(3), [(0, 1, [2.0, 2.0, 2.0])]).unwrap();
        let w = g.composite_weight(0, AlphaVector::uniform(3)).unwrap();
        assert!((w - 2.0).abs() < 1e-15);
    }

    #[test]
    fn composite_weight_dimension_mismatch() {
        let g = MultiGraph::from_edges(2, names(2), [(0, 1, [1.0, 3.0])]).unwrap();
        assert!(matches!(
            g.composite_weight(0, [1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
        assert!(g.collapse([1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn collapse_examples() {
        let g = MultiGraph::from_edges(3, names(2), [(0, 1, [1.0, 0.0]), (1, 2, [0.0, 1.0])])
            .unwrap();
        let view = g.collapse([0.5, 0.5]).unwrap();
        assert_eq!(view.weights(), &[0.5, 0.5]);
        for k in 0..2 {
            let view = g.collapse(AlphaVector::basis(2, k)).unwrap();
            assert_eq!(view.weights(), g.metric_slice(k).as_slice());
        }
        let g1 = MultiGraph::from_edges(3, names(1), [(0, 1, [0.3]), (2, 1, [1.7])]).unwrap();
        assert_eq!(g1.collapse([1.0]).unwrap().weights(), &[0.3, 1.7]);
    }

    #[test]
    fn builder_rejects_bad_edges() {
        let mut b = MultiGraph::builder(3, names(1));
        assert!(b.add_edge(0, 0, &[1.0]).is_err());
        assert!(b.add_edge(0, 3, &[1.0]).is_err());
        assert!(b.add_edge(0, 1, &[-1.0]).is_err());
        assert!(b.add_edge(0, 1, &[f64::NAN]).is_err());
        assert!(b.add_edge(0, 1, &[1.0, 2.0]).is_err());
        b.add_edge(0, 1, &[1.0]).unwrap();
        assert!(b.add_edge(1, 0, &[1.0]).is_err());
    }

    #[test]
    fn adjacency_lists_each_edge_twice() {
        let g = MultiGraph::from_edges(
            4,
            names(1),
            [(0, 1, [1.0]), (1, 2, [1.0]), (2, 0, [1.0]), (2, 3, [1.0])],
        )
        .unwrap();
        let mut count = vec![0; g.n_edges()];
        for v in 0..g.n_vertices() {
            for a in g.neighbors(v) {
                let (x, y) = g.endpoints(a.edge as usize);
                assert!(x == v || y == v);
                assert!(a.neighbor as usize == x || a.neighbor as usize == y);
                count[a.edge as usize] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 2));
        assert_eq!(g.degree(2), 3);
    }

    #[test]
    fn alpha_normalizations() {
        let a = AlphaVector::new(vec![2.0, 6.0]).unwrap();
        assert_eq!(a.coeffs(), &[0.25, 0.75]);
        assert_eq!(a.normalized(Normalization::MaxNorm), vec![1.0 / 3.0, 1.0]);
        assert!(AlphaVector::new(vec![0.0, 0.0]).is_err());
        assert!(AlphaVector::new(vec![-1.0, 2.0]).is_err());
    }

    #[test]
    fn clustering_compaction() {
        let c = Clustering::from_labels(&[7, 7, 9, 9]);
        assert_eq!(c.labels(), &[0, 0, 1, 1]);
        assert_eq!(c.n_clusters(), 2);
        let c = Clustering::from_labels(&[5, 3, 5, 1]);
        assert_eq!(c.labels(), &[0, 1, 0, 2]);
        assert_eq!(c.sizes(), vec![2, 1, 1]);
        assert_eq!(Clustering::singletons(4).n_clusters(), 4);
    }
}
