//! Undirected weighted graph in compressed sparse row form.
//!
//! Every undirected edge is stored twice (once per endpoint) so neighbor
//! scans are contiguous. Adjacency lists are sorted by neighbor index.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) references a node outside 0..{2}")]
    NodeOutOfRange(u32, u32, usize),
    #[error("self-edge on node {0}")]
    SelfEdge(u32),
    #[error("edge ({0}, {1}) has invalid weight {2}")]
    InvalidWeight(u32, u32, f64),
    #[error("expected {expected} node sizes, got {got}")]
    SizeCount { expected: usize, got: usize },
    #[error("node {0} has size zero")]
    ZeroSize(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    node_sizes: Vec<u64>,
}

impl WeightedGraph {
    /// Graph on `node_count` isolated unit-size nodes.
    pub fn empty(node_count: usize) -> Self {
        Self {
            offsets: vec![0; node_count + 1],
            targets: Vec::new(),
            weights: Vec::new(),
            node_sizes: vec![1; node_count],
        }
    }

    /// Builds a graph from undirected edges in either orientation.
    ///
    /// Parallel edges are summed in input order. Zero-weight edges are kept
    /// so that edge existence can be distinguished from a zero relation.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32, f64)>,
    {
        let mut canonical = Vec::new();
        for (a, b, w) in edges {
            if a as usize >= node_count || b as usize >= node_count {
                return Err(GraphError::NodeOutOfRange(a, b, node_count));
            }
            if a == b {
                return Err(GraphError::SelfEdge(a));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(GraphError::InvalidWeight(a, b, w));
            }
            canonical.push(if a < b { (a, b, w) } else { (b, a, w) });
        }
        canonical.sort_by_key(|&(a, b, _)| (a, b));
        let mut merged: Vec<(u32, u32, f64)> = Vec::with_capacity(canonical.len());
        for (a, b, w) in canonical {
            match merged.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += w,
                _ => merged.push((a, b, w)),
            }
        }
        Ok(Self::from_sorted_unique(node_count, &merged))
    }

    /// `edges` must be sorted by `(i, j)` with `i < j` and free of duplicates.
    pub(crate) fn from_sorted_unique(node_count: usize, edges: &[(u32, u32, f64)]) -> Self {
        let mut degree = vec![0usize; node_count];
        for &(a, b, _) in edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        let mut acc = 0;
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets[..node_count].to_vec();
        let mut targets = vec![0u32; acc];
        let mut weights = vec![0f64; acc];
        // Sorted input yields sorted adjacency: entries from lower-indexed
        // neighbors are written before entries to higher-indexed ones.
        for &(a, b, w) in edges {
            let (ia, ib) = (a as usize, b as usize);
            targets[cursor[ia]] = b;
            weights[cursor[ia]] = w;
            cursor[ia] += 1;
            targets[cursor[ib]] = a;
            weights[cursor[ib]] = w;
            cursor[ib] += 1;
        }
        Self {
            offsets,
            targets,
            weights,
            node_sizes: vec![1; node_count],
        }
    }

    pub fn with_node_sizes(mut self, sizes: Vec<u64>) -> Result<Self, GraphError> {
        if sizes.len() != self.node_count() {
            return Err(GraphError::SizeCount {
                expected: self.node_count(),
                got: sizes.len(),
            });
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(GraphError::ZeroSize(i));
        }
        self.node_sizes = sizes;
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_sizes.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn neighbor_weights(&self, node: usize) -> &[f64] {
        &self.weights[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn adjacency(&self, node: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.neighbors(node)
            .iter()
            .copied()
            .zip(self.neighbor_weights(node).iter().copied())
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn is_isolated(&self, node: usize) -> bool {
        self.degree(node) == 0
    }

    pub fn node_size(&self, node: usize) -> u64 {
        self.node_sizes[node]
    }

    pub fn node_sizes(&self) -> &[u64] {
        &self.node_sizes
    }

    /// Weight of edge `(a, b)`, or `None` if the nodes are not adjacent.
    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        let nbrs = self.neighbors(a);
        nbrs.binary_search(&(b as u32))
            .ok()
            .map(|pos| self.weights[self.offsets[a] + pos])
    }

    /// Each undirected edge once, as `(i, j, w)` with `i < j`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        (0..self.node_count()).flat_map(move |i| {
            self.adjacency(i)
                .filter(move |&(j, _)| j as usize > i)
                .map(move |(j, w)| (i as u32, j, w))
        })
    }

    pub fn total_edge_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }

    pub(crate) fn raw_parts(&self) -> (&[usize], &[u32], &[f64]) {
        (&self.offsets, &self.targets, &self.weights)
    }
}
