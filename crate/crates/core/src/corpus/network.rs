//! Normalized direct-citation network.

use super::{CorpusView, PubIdx};
use crate::graph::WeightedGraph;

/// Share of node `i`'s unit influence given to each of its `k_i` relations.
pub fn side_contribution(relations: usize) -> f64 {
    1.0 / relations as f64
}

/// Weight of a direct-citation relation between nodes with `k_i` and `k_j`
/// distinct citation neighbors: the mean of the two side contributions.
pub fn normalized_weight(k_i: usize, k_j: usize) -> f64 {
    0.5 * (side_contribution(k_i) + side_contribution(k_j))
}

/// Publication-level citation graph; node `i` is publication `pubs[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CitationNetwork {
    pub graph: WeightedGraph,
    pub pubs: Vec<PubIdx>,
}

impl CitationNetwork {
    /// Nodes with no citation relation inside the view.
    pub fn isolated(&self) -> Vec<bool> {
        (0..self.graph.node_count())
            .map(|i| self.graph.is_isolated(i))
            .collect()
    }

    pub fn isolated_count(&self) -> usize {
        (0..self.graph.node_count())
            .filter(|&i| self.graph.is_isolated(i))
            .count()
    }

    /// The network restricted to nodes with at least one relation.
    pub fn without_isolated(&self) -> CitationNetwork {
        let keep: Vec<usize> = (0..self.graph.node_count())
            .filter(|&i| !self.graph.is_isolated(i))
            .collect();
        let mut new_id = vec![u32::MAX; self.graph.node_count()];
        for (new, &old) in keep.iter().enumerate() {
            new_id[old] = new as u32;
        }
        let edges: Vec<(u32, u32, f64)> = self
            .graph
            .edges()
            .map(|(a, b, w)| (new_id[a as usize], new_id[b as usize], w))
            .collect();
        CitationNetwork {
            graph: WeightedGraph::from_sorted_unique(keep.len(), &edges),
            pubs: keep.iter().map(|&i| self.pubs[i]).collect(),
        }
    }
}

/// Builds the undirected normalized direct-citation network over `view`.
///
/// Citations in either direction and of any multiplicity between a pair
/// collapse to one edge. Citations leaving the view are ignored.
pub fn build_citation_network(view: &CorpusView<'_>) -> CitationNetwork {
    let corpus = view.corpus();
    let pubs = view.pubs().to_vec();
    let mut node_of = vec![u32::MAX; corpus.publication_count()];
    for (node, &p) in pubs.iter().enumerate() {
        node_of[p as usize] = node as u32;
    }

    let mut pairs: Vec<(u32, u32)> = corpus
        .citations()
        .iter()
        .filter_map(|&(a, b)| {
            let (na, nb) = (node_of[a as usize], node_of[b as usize]);
            (na != u32::MAX && nb != u32::MAX).then(|| if na < nb { (na, nb) } else { (nb, na) })
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();

    let mut relations = vec![0usize; pubs.len()];
    for &(a, b) in &pairs {
        relations[a as usize] += 1;
        relations[b as usize] += 1;
    }
    let edges: Vec<(u32, u32, f64)> = pairs
        .into_iter()
        .map(|(a, b)| {
            (
                a,
                b,
                normalized_weight(relations[a as usize], relations[b as usize]),
            )
        })
        .collect();
    let graph = WeightedGraph::from_sorted_unique(pubs.len(), &edges);
    CitationNetwork { graph, pubs }
}
