//! Adjusted Rand index (Hubert & Arabie) from a contingency table.
//!
//! Pair counts are exact 128-bit integers; the index itself is formed from
//! the exact rational `2(T·I − A·B) / (T(A + B) − 2AB)` with `I = Σ C(n_ij, 2)`,
//! `A = Σ C(a_i, 2)`, `B = Σ C(b_j, 2)`, `T = C(n, 2)`, so the only rounding
//! is the final conversion. The value can be negative when agreement is
//! below chance.

use std::collections::HashMap;

use super::{EvaluationError, Labeling};

/// Classification of the `C(n, 2)` element pairs by co-membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairCounts {
    /// Together in both partitions.
    pub same_same: u128,
    /// Together in the first only.
    pub same_diff: u128,
    /// Together in the second only.
    pub diff_same: u128,
    pub diff_diff: u128,
}

impl PairCounts {
    pub fn total(&self) -> u128 {
        self.same_same + self.same_diff + self.diff_same + self.diff_diff
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonResult {
    pub ari: f64,
    pub pairs: PairCounts,
}

fn choose2(k: u64) -> u128 {
    let k = u128::from(k);
    k * k.saturating_sub(1) / 2
}

/// ARI between two labelings of the same elements.
pub fn adjusted_rand_index(x: &Labeling, y: &Labeling) -> Result<ComparisonResult, EvaluationError> {
    if x.items() != y.items() {
        let detail = match x.items().iter().zip(y.items()).position(|(a, b)| a != b) {
            Some(pos) => format!(
                "element {} vs {} at position {pos}",
                x.items()[pos],
                y.items()[pos]
            ),
            None => format!("{} vs {} elements", x.len(), y.len()),
        };
        return Err(EvaluationError::ElementMismatch(detail));
    }
    ari_from_labels(x.labels(), y.labels())
}

/// ARI between two label vectors aligned by position.
pub fn ari_from_labels(x: &[u32], y: &[u32]) -> Result<ComparisonResult, EvaluationError> {
    if x.len() != y.len() {
        return Err(EvaluationError::ElementMismatch(format!(
            "{} vs {} elements",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(EvaluationError::TooFewElements(n));
    }
    let mut rows: HashMap<u32, u64> = HashMap::new();
    let mut cols: HashMap<u32, u64> = HashMap::new();
    let mut cells: HashMap<(u32, u32), u64> = HashMap::new();
    for (&a, &b) in x.iter().zip(y) {
        *rows.entry(a).or_default() += 1;
        *cols.entry(b).or_default() += 1;
        *cells.entry((a, b)).or_default() += 1;
    }
    let index: u128 = cells.values().map(|&c| choose2(c)).sum();
    let sum_a: u128 = rows.values().map(|&c| choose2(c)).sum();
    let sum_b: u128 = cols.values().map(|&c| choose2(c)).sum();
    let total = choose2(n as u64);

    let pairs = PairCounts {
        same_same: index,
        same_diff: sum_a - index,
        diff_same: sum_b - index,
        diff_diff: total + index - sum_a - sum_b,
    };

    let numerator = 2 * (total as i128 * index as i128 - sum_a as i128 * sum_b as i128);
    let denominator = total as i128 * (sum_a + sum_b) as i128 - 2 * sum_a as i128 * sum_b as i128;
    // A zero denominator only arises when both partitions are all-singletons
    // or both are a single class, i.e. identical.
    let ari = if denominator == 0 {
        1.0
    } else {
        numerator as f64 / denominator as f64
    };
    Ok(ComparisonResult { ari, pairs })
}
