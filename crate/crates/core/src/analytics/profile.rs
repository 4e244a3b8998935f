use std::collections::HashMap;

use super::AnalyticsError;
use crate::evaluation::Labeling;

/// How a typical baseline class spreads over the classes of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageClassProfile {
    /// Average number of partition classes per baseline class, rounded.
    pub spread: usize,
    /// Baseline classes spread over exactly `spread` classes.
    pub selected_classes: Vec<u32>,
    /// Mean article count at each rank `1..=spread` over the selected classes.
    pub rank_averages: Vec<f64>,
    /// Mean size of the selected baseline classes.
    pub selected_mean_size: f64,
}

impl AverageClassProfile {
    pub fn selected_class_count(&self) -> usize {
        self.selected_classes.len()
    }
}

/// Builds the average-class profile of `baseline` against `partition`,
/// whose items must include every baseline article.
pub fn average_class_profile(
    baseline: &Labeling,
    partition: &Labeling,
) -> Result<AverageClassProfile, AnalyticsError> {
    let classes = baseline.classes();
    if classes.is_empty() {
        return Err(AnalyticsError::Empty("baseline has no classes".into()));
    }
    let mut rank_counts: Vec<(u32, Vec<u64>)> = Vec::with_capacity(classes.len());
    for (label, members) in &classes {
        let mut counts: HashMap<u32, u64> = HashMap::new();
        for &item in members {
            let target = partition.label_of(item).ok_or_else(|| {
                AnalyticsError::Mismatch(format!("baseline article {item} is not classified"))
            })?;
            *counts.entry(target).or_default() += 1;
        }
        let mut sorted: Vec<u64> = counts.into_values().collect();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        rank_counts.push((*label, sorted));
    }
    let total_spread: usize = rank_counts.iter().map(|(_, c)| c.len()).sum();
    // Round half up: (2·sum + n) / (2n).
    let n = rank_counts.len();
    let spread = (2 * total_spread + n) / (2 * n);

    let selected: Vec<&(u32, Vec<u64>)> =
        rank_counts.iter().filter(|(_, c)| c.len() == spread).collect();
    if selected.is_empty() {
        let mut available: Vec<usize> = rank_counts.iter().map(|(_, c)| c.len()).collect();
        available.sort_unstable();
        available.dedup();
        let best = available
            .iter()
            .map(|&a| a.abs_diff(spread))
            .min()
            .unwrap_or(0);
        let nearest = available
            .into_iter()
            .filter(|a| a.abs_diff(spread) == best)
            .collect();
        return Err(AnalyticsError::NoMatchingSpread { spread, nearest });
    }
    let mut sums = vec![0u64; spread];
    for (_, counts) in &selected {
        for (rank, &c) in counts.iter().enumerate() {
            sums[rank] += c;
        }
    }
    let k = selected.len() as f64;
    let total: u64 = sums.iter().sum();
    Ok(AverageClassProfile {
        spread,
        selected_classes: selected.iter().map(|(l, _)| *l).collect(),
        rank_averages: sums.iter().map(|&s| s as f64 / k).collect(),
        selected_mean_size: total as f64 / k,
    })
}
