//! Nearest-rank percentiles, plain and weighted.
//!
//! The nearest-rank estimator returns an observed value: the smallest value
//! whose cumulative share of the distribution reaches `p` percent.

/// 1-based nearest rank of percentile `p` (0..=100) among `total` items.
fn rank(p: f64, total: u64) -> u64 {
    let r = (p * total as f64 / 100.0).ceil() as u64;
    r.clamp(1, total)
}

/// Percentile `p` of an ascending slice. Returns `None` when empty.
pub fn nearest_rank<T: Copy>(sorted: &[T], p: f64) -> Option<T> {
    if sorted.is_empty() {
        return None;
    }
    let r = rank(p, sorted.len() as u64);
    Some(sorted[(r - 1) as usize])
}

/// Percentile `p` of a distribution given as ascending `(value, weight)`
/// pairs, where each value is repeated `weight` times.
pub fn weighted_nearest_rank(sorted: &[(u64, u64)], p: f64) -> Option<u64> {
    let total: u64 = sorted.iter().map(|&(_, w)| w).sum();
    if total == 0 {
        return None;
    }
    let r = rank(p, total);
    let mut cumulative = 0;
    for &(value, weight) in sorted {
        cumulative += weight;
        if cumulative >= r {
            return Some(value);
        }
    }
    sorted.last().map(|&(v, _)| v)
}

/// Most frequent value; ties go to the smallest value.
pub fn mode(values: &[u64]) -> Option<u64> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mut best: Option<(u64, usize)> = None;
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        let run = j - i;
        if best.map_or(true, |(_, n)| run > n) {
            best = Some((v, run));
        }
        i = j;
    }
    best.map(|(v, _)| v)
}
