//! Recover linear aggregations of multi-metric edge weights that justify a
//! ground-truth clustering.
//!
//! A [`MultiGraph`] carries `K` similarity metrics on every edge. Given a
//! ground-truth [`Clustering`], the crate searches the simplex of aggregation
//! vectors [`AlphaVector`] for one whose composite graph makes the clustering
//! look right, either by maximizing the arctan-smoothed count of vertices
//! with positive holding power ([`objective`]) or by clustering the composite
//! graph and minimizing the variation of information to the ground truth
//! ([`experiments::inverse_recover`]).

pub mod clusterer;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod objective;
pub mod optimizer;
pub mod stats;
pub mod synthgen;

pub use error::{Error, ErrorKind, Result};
pub use graph::{AlphaVector, Clustering, MultiGraph, Normalization, WeightedView};
