//! Comparing classifications: derived classifications restricted to the
//! baseline article set, the adjusted Rand index, and the resolution sweep
//! that picks the specialty granularity.

mod ari;
mod derive;
mod sweep;

pub use ari::{adjusted_rand_index, ari_from_labels, ComparisonResult, PairCounts};
pub use derive::derive_classification;
pub use sweep::{
    run_sweep, select_best, AdaptiveSweep, SweepConfig, SweepInput, SweepResult, SweepRow,
};

use std::collections::HashMap;

use thiserror::Error;

use crate::analytics::AnalyticsError;
use crate::cluster::ClusterError;

#[derive(Debug, Error, PartialEq)]
pub enum EvaluationError {
    #[error("labelings cover different elements: {0}")]
    ElementMismatch(String),
    #[error("need at least two elements to compare partitions, got {0}")]
    TooFewElements(usize),
    #[error("{count} baseline articles are not classified, e.g. {examples:?}")]
    NotCovered { count: usize, examples: Vec<u32> },
    #[error("resolution list is empty")]
    EmptyResolutions,
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
}

/// Class labels over an ascending set of element ids (publication indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    items: Vec<u32>,
    labels: Vec<u32>,
}

impl Labeling {
    pub fn new(items: Vec<u32>, labels: Vec<u32>) -> Result<Self, EvaluationError> {
        if items.len() != labels.len() {
            return Err(EvaluationError::InvalidLabeling(format!(
                "{} items but {} labels",
                items.len(),
                labels.len()
            )));
        }
        if !items.windows(2).all(|w| w[0] < w[1]) {
            return Err(EvaluationError::InvalidLabeling(
                "items must be strictly ascending".into(),
            ));
        }
        Ok(Self { items, labels })
    }

    pub(crate) fn new_unchecked(items: Vec<u32>, labels: Vec<u32>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        Self { items, labels }
    }

    /// From `(item, label)` pairs in any order; items must be distinct.
    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Result<Self, EvaluationError> {
        pairs.sort_unstable();
        let (items, labels) = pairs.into_iter().unzip();
        Self::new(items, labels)
    }

    pub fn items(&self) -> &[u32] {
        &self.items
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn label_of(&self, item: u32) -> Option<u32> {
        self.items
            .binary_search(&item)
            .ok()
            .map(|pos| self.labels[pos])
    }

    /// Same grouping with labels renumbered by first appearance.
    pub fn dense(&self) -> Labeling {
        let mut map = HashMap::new();
        let labels = self
            .labels
            .iter()
            .map(|l| {
                let next = map.len() as u32;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Labeling {
            items: self.items.clone(),
            labels,
        }
    }

    pub fn class_count(&self) -> usize {
        let mut l = self.labels.clone();
        l.sort_unstable();
        l.dedup();
        l.len()
    }

    /// `(label, members)` for every class, ascending by label.
    pub fn classes(&self) -> Vec<(u32, Vec<u32>)> {
        let mut by_label: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        for (&item, &label) in self.items.iter().zip(&self.labels) {
            by_label.entry(label).or_default().push(item);
        }
        by_label.into_iter().collect()
    }

    pub fn class_sizes(&self) -> Vec<u64> {
        self.classes()
            .into_iter()
            .map(|(_, m)| m.len() as u64)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeling_validation() {
        assert!(Labeling::new(vec![1, 1], vec![0, 0]).is_err());
        assert!(Labeling::new(vec![1], vec![0, 0]).is_err());
        let l = Labeling::from_pairs(vec![(9, 4), (2, 7), (5, 4)]).unwrap();
        assert_eq!(l.items(), &[2, 5, 9]);
        assert_eq!(l.label_of(9), Some(4));
        assert_eq!(l.label_of(3), None);
        assert_eq!(l.dense().labels(), &[0, 1, 1]);
        assert_eq!(l.class_count(), 2);
        assert_eq!(l.classes(), vec![(4, vec![5, 9]), (7, vec![2])]);
    }
}
