//! Clustering comparison (variation of information) and clustering quality
//! (weighted modularity).
//!
//! Information quantities are in nats; use [`nats_to_bits`] for bits.
//! `0 · ln 0` is taken as 0 throughout.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Clustering, WeightedView};

/// Co-membership counts of two clusterings over the same vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    n: usize,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    // nonzero cells (row, col, count), sorted by (row, col)
    cells: Vec<(usize, usize, usize)>,
}

impl ContingencyTable {
    pub fn new(a: &Clustering, b: &Clustering) -> Result<Self> {
        if a.n_vertices() != b.n_vertices() {
            return Err(Error::InvalidClustering(format!(
                "clusterings cover different vertex sets ({} vs {})",
                a.n_vertices(),
                b.n_vertices()
            )));
        }
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        for (&k, &l) in a.labels().iter().zip(b.labels()) {
            *counts.entry((k, l)).or_insert(0) += 1;
        }
        let mut cells: Vec<(usize, usize, usize)> =
            counts.into_iter().map(|((k, l), c)| (k, l, c)).collect();
        cells.sort_unstable();
        Ok(ContingencyTable {
            n: a.n_vertices(),
            row_sums: a.sizes(),
            col_sums: b.sizes(),
            cells,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn count(&self, row: usize, col: usize) -> usize {
        self.cells
            .binary_search_by(|&(k, l, _)| (k, l).cmp(&(row, col)))
            .map(|i| self.cells[i].2)
            .unwrap_or(0)
    }

    /// Nonzero cells as `(row, col, count)`.
    pub fn cells(&self) -> &[(usize, usize, usize)] {
        &self.cells
    }

    pub fn mutual_information(&self) -> f64 {
        let n = self.n as f64;
        self.cells
            .iter()
            .map(|&(k, l, c)| {
                let c = c as f64;
                let expected = self.row_sums[k] as f64 * self.col_sums[l] as f64;
                (c / n) * (n * c / expected).ln()
            })
            .sum()
    }
}

fn entropy_of_sizes(sizes: &[usize], n: usize) -> f64 {
    let n = n as f64;
    -sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

/// Shannon entropy of the cluster-size distribution.
pub fn entropy(c: &Clustering) -> f64 {
    entropy_of_sizes(&c.sizes(), c.n_vertices())
}

pub fn mutual_information(a: &Clustering, b: &Clustering) -> Result<f64> {
    Ok(ContingencyTable::new(a, b)?.mutual_information())
}

/// `d_VI(a, b) = H(a) + H(b) − 2 I(a, b)`, a metric on partitions.
///
/// Summed as `H(a|b) + H(b|a)` cell by cell, so every term is nonnegative,
/// identical partitions give exactly 0 and swapping the arguments gives
/// bit-identical results.
pub fn variation_of_information(a: &Clustering, b: &Clustering) -> Result<f64> {
    let table = ContingencyTable::new(a, b)?;
    let n = table.n() as f64;
    let mut terms: Vec<f64> = table
        .cells()
        .iter()
        .map(|&(k, l, c)| {
            let c = c as f64;
            let (r, s) = (table.row_sums()[k] as f64, table.col_sums()[l] as f64);
            (c / n) * ((r / c).ln() + (s / c).ln())
        })
        .collect();
    // the swapped table yields the same multiset of terms; fix the order
    terms.sort_unstable_by(f64::total_cmp);
    Ok(terms.iter().sum())
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

/// Weighted modularity `Q = Σ_c [W_c/m − (D_c/2m)²]`, where `W_c` is the
/// weight inside cluster `c`, `D_c` its total strength and `m` the total
/// edge weight.
pub fn modularity(g: &WeightedView<'_>, c: &Clustering) -> Result<f64> {
    c.check_vertices(g.n_vertices())?;
    let m = g.total_weight();
    if m <= 0.0 {
        return Err(Error::ZeroWeight);
    }
    let mut internal = vec![0.0; c.n_clusters()];
    let mut strength = vec![0.0; c.n_clusters()];
    let graph = g.graph();
    for (e, &w) in g.weights().iter().enumerate() {
        let (u, v) = graph.endpoints(e);
        let (cu, cv) = (c.label(u), c.label(v));
        if cu == cv {
            internal[cu] += w;
        }
        strength[cu] += w;
        strength[cv] += w;
    }
    Ok(internal
        .iter()
        .zip(&strength)
        .map(|(w_in, d)| w_in / m - (d / (2.0 * m)).powi(2))
        .sum())
}

/// Modularity of `c` relative to that of the reference clustering. Values
/// above one are legitimate.
pub fn normalized_modularity(
    g: &WeightedView<'_>,
    c: &Clustering,
    reference: &Clustering,
) -> Result<f64> {
    let q_ref = modularity(g, reference)?;
    if q_ref == 0.0 {
        return Err(Error::ZeroReferenceModularity);
    }
    Ok(modularity(g, c)? / q_ref)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiGraph;

    const LN2: f64 = std::f64::consts::LN_2;

    fn two_triangles() -> MultiGraph {
        let edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)];
        MultiGraph::from_edges(6, vec!["w".into()], edges.iter().map(|&(u, v)| (u, v, [1.0])))
            .unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&Clustering::all_in_one(4)), 0.0);
        assert!((entropy(&Clustering::singletons(4)) - 4f64.ln()).abs() < 1e-15);
        assert!((entropy(&Clustering::from_labels(&[0, 0, 1, 1])) - LN2).abs() < 1e-15);
    }

    #[test]
    fn mutual_information_examples() {
        let c = Clustering::from_labels(&[0, 0, 1, 1]);
        assert!((mutual_information(&c, &c).unwrap() - LN2).abs() < 1e-15);
        let one = Clustering::all_in_one(4);
        assert_eq!(mutual_information(&one, &c).unwrap(), 0.0);
        assert!(mutual_information(&one, &Clustering::all_in_one(3)).is_err());
    }

    #[test]
    fn mutual_information_swapped_vertex() {
        let a = Clustering::from_labels(&[0, 0, 1, 1]);
        let b = Clustering::from_labels(&[0, 1, 0, 1]);
        // direct summation over the 2x2 table: every cell holds 1 of 4 vertices
        // with marginals 1/2, so each term is (1/4) ln((1/4)/(1/4)) = 0
        assert!(mutual_information(&a, &b).unwrap().abs() < 1e-15);
        let b = Clustering::from_labels(&[0, 0, 0, 1]);
        // cells: (0,0)=2, (1,0)=1, (1,1)=1; rows {2,2}, cols {3,1}
        let oracle = 0.5 * (0.5f64 / (0.5 * 0.75)).ln()
            + 0.25 * (0.25f64 / (0.5 * 0.75)).ln()
            + 0.25 * (0.25f64 / (0.5 * 0.25)).ln();
        assert!((mutual_information(&a, &b).unwrap() - oracle).abs() < 1e-15);
    }

    #[test]
    fn vi_examples() {
        let c = Clustering::from_labels(&[3, 3, 1, 2]);
        assert_eq!(variation_of_information(&c, &c).unwrap(), 0.0);
        let vi = variation_of_information(&Clustering::all_in_one(4), &Clustering::singletons(4))
            .unwrap();
        assert!((vi - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn contingency_table_margins() {
        let a = Clustering::from_labels(&[0, 0, 1, 1, 2]);
        let b = Clustering::from_labels(&[0, 1, 1, 1, 0]);
        let t = ContingencyTable::new(&a, &b).unwrap();
        assert_eq!(t.count(0, 0), 1);
        assert_eq!(t.count(1, 1), 2);
        assert_eq!(t.count(2, 1), 0);
        let total: usize = t.cells().iter().map(|c| c.2).sum();
        assert_eq!(total, 5);
        assert_eq!(t.row_sums(), &[2, 2, 1]);
        assert_eq!(t.col_sums(), &[2, 3]);
    }

    #[test]
    fn modularity_two_triangles() {
        let g = two_triangles();
        let view = g.slice_view(0);
        let comps = Clustering::from_labels(&[0, 0, 0, 1, 1, 1]);
        // per-cluster oracle: 2 * (3/6 - (6/12)^2)
        assert_eq!(modularity(&view, &comps).unwrap(), 0.5);
        assert_eq!(modularity(&view, &Clustering::all_in_one(6)).unwrap(), 0.0);
        let scaled = view.scaled(3.7);
        let q = modularity(&scaled, &comps).unwrap();
        assert!((q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn modularity_errors() {
        let g = MultiGraph::from_edges(2, vec!["w".into()], [(0, 1, [0.0])]).unwrap();
        assert!(matches!(
            modularity(&g.slice_view(0), &Clustering::all_in_one(2)),
            Err(Error::ZeroWeight)
        ));
        let g = two_triangles();
        assert!(modularity(&g.slice_view(0), &Clustering::all_in_one(5)).is_err());
        assert!(matches!(
            normalized_modularity(
                &g.slice_view(0),
                &Clustering::singletons(6),
                &Clustering::all_in_one(6)
            ),
            Err(Error::ZeroReferenceModularity)
        ));
    }

    #[test]
    fn normalized_modularity_examples() {
        let g = two_triangles();
        let view = g.slice_view(0);
        let truth = Clustering::from_labels(&[0, 0, 0, 1, 1, 1]);
        assert_eq!(normalized_modularity(&view, &truth, &truth).unwrap(), 1.0);
        let other = Clustering::from_labels(&[0, 0, 1, 1, 2, 2]);
        let expected = modularity(&view, &other).unwrap() / 0.5;
        assert_eq!(normalized_modularity(&view, &other, &truth).unwrap(), expected);
    }
}
