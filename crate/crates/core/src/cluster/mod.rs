//! Constant Potts model clustering with the smart local moving heuristic,
//! and the class-level aggregation used to build the second hierarchy level.

mod classes;
mod quality;
mod slm;

pub use classes::{
    aggregate_to_class_graph, class_relatedness, cluster_classes, ClassGraph,
    HierarchicalClassification, PublicationHierarchy,
};
pub use quality::cpm_quality;
pub use slm::{slm_cluster, slm_cluster_traced};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ClusterError {
    #[error("partition covers {partition} nodes but the graph has {graph}")]
    NotTotal { partition: usize, graph: usize },
    #[error("class relatedness of class {0} with itself is undefined")]
    SelfRelatedness(u32),
    #[error("class {0} does not exist")]
    UnknownClass(u32),
    #[error("class graph does not match base partition: {0}")]
    ClassGraphMismatch(String),
    #[error("invalid cluster configuration: {0}")]
    InvalidConfig(String),
}

/// A total assignment of nodes to dense, non-empty classes `0..class_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<u32>,
    class_count: u32,
}

impl Partition {
    /// Relabels arbitrary labels densely in order of first appearance.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let mut map = std::collections::HashMap::new();
        let dense = labels
            .iter()
            .map(|l| {
                let next = map.len() as u32;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self {
            labels: dense,
            class_count: map.len() as u32,
        }
    }

    /// Labels already dense in `0..class_count`, every class used.
    pub(crate) fn from_dense(labels: Vec<u32>, class_count: u32) -> Self {
        debug_assert!(labels.iter().all(|&l| l < class_count));
        Self {
            labels,
            class_count,
        }
    }

    /// Labels that must already be dense: every class in `0..=max` used.
    pub fn try_from_dense(labels: Vec<u32>) -> Result<Self, ClusterError> {
        let class_count = labels.iter().max().map_or(0, |&m| m + 1);
        let mut used = vec![false; class_count as usize];
        for &l in &labels {
            used[l as usize] = true;
        }
        if let Some(gap) = used.iter().position(|u| !u) {
            return Err(ClusterError::UnknownClass(gap as u32));
        }
        Ok(Self {
            labels,
            class_count,
        })
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n as u32).collect(),
            class_count: n as u32,
        }
    }

    pub fn single_class(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            class_count: u32::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_count as usize
    }

    pub fn class_of(&self, node: usize) -> u32 {
        self.labels[node]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Number of nodes per class.
    pub fn class_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.class_count()];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Member nodes of each class, ascending.
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut members = vec![Vec::new(); self.class_count()];
        for (node, &l) in self.labels.iter().enumerate() {
            members[l as usize].push(node as u32);
        }
        members
    }

    /// Renumbers classes by decreasing size; equal sizes keep the order of
    /// their lowest member.
    pub fn sorted_by_size(&self) -> Self {
        let first = Self::from_labels(&self.labels);
        let sizes = first.class_sizes();
        let mut order: Vec<u32> = (0..first.class_count).collect();
        order.sort_by(|&a, &b| sizes[b as usize].cmp(&sizes[a as usize]).then(a.cmp(&b)));
        let mut rank = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old as usize] = new as u32;
        }
        Self {
            labels: first.labels.iter().map(|&l| rank[l as usize]).collect(),
            class_count: first.class_count,
        }
    }

    /// True when both partitions group the nodes identically.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        self.len() == other.len() && Self::from_labels(&self.labels) == Self::from_labels(&other.labels)
    }

    /// Composes `self` (node -> class) with `upper` (class -> super-class).
    pub fn lift(&self, upper: &Partition) -> Partition {
        assert_eq!(upper.len(), self.class_count(), "upper partition must cover every class");
        Partition {
            labels: self.labels.iter().map(|&c| upper.labels[c as usize]).collect(),
            class_count: upper.class_count,
        }
    }
}

/// Parameters of one clustering run.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterConfig {
    /// CPM resolution; larger values give smaller classes.
    pub resolution: f64,
    pub seed: u64,
    pub max_outer_iterations: usize,
    /// Minimum quality gain for a move or an outer iteration to count.
    pub quality_tolerance: f64,
    /// Independent restarts from singletons; the best quality wins.
    pub random_starts: usize,
}

impl ClusterConfig {
    pub fn new(resolution: f64) -> Self {
        Self {
            resolution,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), ClusterError> {
        if !(self.resolution.is_finite() && self.resolution > 0.0) {
            return Err(ClusterError::InvalidConfig(format!(
                "resolution must be positive, got {}",
                self.resolution
            )));
        }
        if self.max_outer_iterations == 0 {
            return Err(ClusterError::InvalidConfig(
                "max_outer_iterations must be at least 1".into(),
            ));
        }
        if !(self.quality_tolerance >= 0.0) {
            return Err(ClusterError::InvalidConfig(
                "quality_tolerance must be non-negative".into(),
            ));
        }
        if self.random_starts == 0 {
            return Err(ClusterError::InvalidConfig(
                "random_starts must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            resolution: 1.0,
            seed: 0,
            max_outer_iterations: 100,
            quality_tolerance: 1e-12,
            random_starts: 1,
        }
    }
}
