use std::collections::HashMap;
use std::ops::RangeInclusive;

use super::AnalyticsError;
use crate::cluster::PublicationHierarchy;
use crate::corpus::Corpus;
use crate::evaluation::Labeling;
use crate::percentile::{mode, nearest_rank, weighted_nearest_rank};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// Every class counts once.
    ByClass,
    /// Every article contributes the size of its class.
    ByArticle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassSizeStats {
    pub weighting: Weighting,
    pub classes: usize,
    pub articles: u64,
    pub mean: f64,
    pub median: f64,
    pub p10: f64,
    pub p90: f64,
}

/// Size distribution summary over classes of at least `min_size` articles.
/// Empty classes never count.
pub fn class_size_stats(
    sizes: &[u64],
    weighting: Weighting,
    min_size: u64,
) -> Result<ClassSizeStats, AnalyticsError> {
    let mut kept: Vec<u64> = sizes
        .iter()
        .copied()
        .filter(|&s| s > 0 && s >= min_size)
        .collect();
    if kept.is_empty() {
        return Err(AnalyticsError::Empty(format!(
            "{} classes, none with at least {} articles",
            sizes.len(),
            min_size.max(1)
        )));
    }
    kept.sort_unstable();
    let articles: u64 = kept.iter().sum();
    let (mean, pct): (f64, Box<dyn Fn(f64) -> u64>) = match weighting {
        Weighting::ByClass => {
            let mean = articles as f64 / kept.len() as f64;
            let sorted = kept.clone();
            (
                mean,
                Box::new(move |p| nearest_rank(&sorted, p).expect("non-empty")),
            )
        }
        Weighting::ByArticle => {
            let squares: u128 = kept.iter().map(|&s| u128::from(s) * u128::from(s)).sum();
            let mean = squares as f64 / articles as f64;
            let weighted: Vec<(u64, u64)> = kept.iter().map(|&s| (s, s)).collect();
            (
                mean,
                Box::new(move |p| weighted_nearest_rank(&weighted, p).expect("non-empty")),
            )
        }
    };
    Ok(ClassSizeStats {
        weighting,
        classes: kept.len(),
        articles,
        mean,
        median: pct(50.0) as f64,
        p10: pct(10.0) as f64,
        p90: pct(90.0) as f64,
    })
}

/// Fraction of articles in classes with fewer than `threshold` articles.
pub fn small_class_share(sizes: &[u64], threshold: u64) -> f64 {
    let total: u64 = sizes.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let small: u64 = sizes.iter().filter(|&&s| s < threshold).sum();
    small as f64 / total as f64
}

/// Summary of an integer-valued distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionStats {
    pub count: usize,
    pub mean: f64,
    pub median: u64,
    pub mode: u64,
    pub p10: u64,
    pub p90: u64,
}

pub fn distribution_stats(values: &[u64]) -> Option<DistributionStats> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let pct = |p| nearest_rank(&sorted, p).expect("non-empty");
    Some(DistributionStats {
        count: sorted.len(),
        mean: sorted.iter().sum::<u64>() as f64 / sorted.len() as f64,
        median: pct(50.0),
        mode: mode(&sorted).expect("non-empty"),
        p10: pct(10.0),
        p90: pct(90.0),
    })
}

/// For specialties with at least `specialty_min` articles, the number of
/// their topics with at least `topic_min` articles. `None` when no
/// specialty qualifies.
pub fn topics_per_specialty(
    hier: &PublicationHierarchy,
    specialty_min: u64,
    topic_min: u64,
) -> Option<DistributionStats> {
    let mut specialty_size: HashMap<u32, u64> = HashMap::new();
    let mut topic_size: HashMap<u32, (u32, u64)> = HashMap::new();
    for (_, topic, specialty) in hier.rows() {
        *specialty_size.entry(specialty).or_default() += 1;
        topic_size.entry(topic).or_insert((specialty, 0)).1 += 1;
    }
    let mut qualifying: HashMap<u32, u64> = specialty_size
        .iter()
        .filter(|(_, &n)| n >= specialty_min)
        .map(|(&s, _)| (s, 0))
        .collect();
    for &(specialty, n) in topic_size.values() {
        if n >= topic_min {
            if let Some(count) = qualifying.get_mut(&specialty) {
                *count += 1;
            }
        }
    }
    let counts: Vec<u64> = qualifying.into_values().collect();
    distribution_stats(&counts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct YearRow {
    pub year: i32,
    pub articles: u64,
    /// `None` for years without classified articles.
    pub stats: Option<ClassSizeStats>,
}

/// Per-year article count and article-weighted class sizes, each class
/// restricted to the articles of that year.
pub fn yearly_class_stats(
    classes: &Labeling,
    corpus: &Corpus,
    years: RangeInclusive<i32>,
) -> Vec<YearRow> {
    let mut by_year: HashMap<i32, HashMap<u32, u64>> = HashMap::new();
    for (&p, &c) in classes.items().iter().zip(classes.labels()) {
        let year = corpus.publication(p).year;
        if years.contains(&year) {
            *by_year.entry(year).or_default().entry(c).or_default() += 1;
        }
    }
    years
        .map(|year| match by_year.get(&year) {
            Some(counts) => {
                let sizes: Vec<u64> = counts.values().copied().collect();
                YearRow {
                    year,
                    articles: sizes.iter().sum(),
                    stats: class_size_stats(&sizes, Weighting::ByArticle, 0).ok(),
                }
            }
            None => {
                log::warn!("no classified articles in {year}");
                YearRow {
                    year,
                    articles: 0,
                    stats: None,
                }
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HistogramBin {
    /// Inclusive lower bound.
    pub low: u64,
    /// Exclusive upper bound.
    pub high: u64,
    pub count: usize,
}

/// Fixed-width bins `[k·w, (k+1)·w)` from zero to the largest value.
pub fn size_histogram(values: &[u64], width: u64) -> Vec<HistogramBin> {
    assert!(width > 0, "bin width must be positive");
    let Some(&max) = values.iter().max() else {
        return Vec::new();
    };
    let mut bins: Vec<HistogramBin> = (0..=max / width)
        .map(|k| HistogramBin {
            low: k * width,
            high: (k + 1) * width,
            count: 0,
        })
        .collect();
    for &v in values {
        bins[(v / width) as usize].count += 1;
    }
    bins
}

/// Most populated bin; ties go to the lowest bin.
pub fn modal_interval(values: &[u64], width: u64) -> Option<HistogramBin> {
    size_histogram(values, width)
        .into_iter()
        .fold(None, |best: Option<HistogramBin>, bin| match best {
            Some(b) if b.count >= bin.count => Some(b),
            _ => Some(bin),
        })
}
