use super::{EvaluationError, Labeling};

const MAX_REPORTED_MISSING: usize = 10;

/// Restricts `acplc` to the baseline article set `p_prime` (ascending, unique).
///
/// Classes with no member in `p_prime` disappear and non-members are
/// dropped from the remaining classes, so the result partitions `p_prime`
/// exactly. Class labels are kept from `acplc`.
pub fn derive_classification(
    acplc: &Labeling,
    p_prime: &[u32],
) -> Result<Labeling, EvaluationError> {
    if !p_prime.windows(2).all(|w| w[0] < w[1]) {
        return Err(EvaluationError::InvalidLabeling(
            "baseline articles must be strictly ascending".into(),
        ));
    }
    let mut labels = Vec::with_capacity(p_prime.len());
    let mut missing = Vec::new();
    let mut missing_count = 0usize;
    // Both sides ascending: merge walk.
    let (items, source) = (acplc.items(), acplc.labels());
    let mut pos = 0usize;
    for &p in p_prime {
        while pos < items.len() && items[pos] < p {
            pos += 1;
        }
        if pos < items.len() && items[pos] == p {
            labels.push(source[pos]);
        } else {
            missing_count += 1;
            if missing.len() < MAX_REPORTED_MISSING {
                missing.push(p);
            }
        }
    }
    if missing_count > 0 {
        return Err(EvaluationError::NotCovered {
            count: missing_count,
            examples: missing,
        });
    }
    Ok(Labeling::new_unchecked(p_prime.to_vec(), labels))
}
