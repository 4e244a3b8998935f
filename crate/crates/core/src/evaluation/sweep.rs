//! Resolution sweep over the topic-level class graph.

use rayon::prelude::*;

use super::{adjusted_rand_index, derive_classification, EvaluationError, Labeling};
use crate::analytics::{class_size_stats, ClassSizeStats, Weighting};
use crate::cluster::{cluster_classes, ClassGraph, ClusterConfig, HierarchicalClassification, Partition};
use crate::corpus::PubIdx;

/// ARI differences at or below this count as ties.
const ARI_TIE: f64 = 1e-12;

/// Extends the ladder past an endpoint while the best ARI sits on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveSweep {
    pub step: f64,
    pub max_extra_runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Ascending, positive.
    pub resolutions: Vec<f64>,
    /// Clustering parameters for every run; the resolution is overridden.
    pub cluster: ClusterConfig,
    /// Threshold for the "large classes" column.
    pub large_class_min: u64,
    pub adaptive: Option<AdaptiveSweep>,
}

impl SweepConfig {
    /// `count` resolutions `start, start + step, …`.
    pub fn ladder(start: f64, step: f64, count: usize) -> Vec<f64> {
        (0..count).map(|i| tidy(start + step * i as f64)).collect()
    }

    pub fn new(resolutions: Vec<f64>) -> Self {
        Self {
            resolutions,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.cluster.seed = seed;
        self
    }

    fn validate(&self) -> Result<(), EvaluationError> {
        if self.resolutions.is_empty() {
            return Err(EvaluationError::EmptyResolutions);
        }
        for &r in &self.resolutions {
            ClusterConfig {
                resolution: r,
                ..self.cluster.clone()
            }
            .validate()?;
        }
        Ok(())
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            resolutions: Self::ladder(5e-7, 5e-7, 6),
            cluster: ClusterConfig::default(),
            large_class_min: 500,
            adaptive: None,
        }
    }
}

/// Rounds away accumulated binary noise (`3 × 5e-7` prints as `1.5e-6`).
fn tidy(v: f64) -> f64 {
    format!("{v:.12e}").parse().unwrap_or(v)
}

#[derive(Debug, Clone, Copy)]
pub struct SweepInput<'a> {
    pub class_graph: &'a ClassGraph,
    /// Node → topic partition the class graph was built from.
    pub topics: &'a Partition,
    /// Publication of each node, ascending.
    pub pubs: &'a [PubIdx],
    /// Baseline classification over P′.
    pub baseline: &'a Labeling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub resolution: f64,
    pub ari: f64,
    pub n_classes: usize,
    pub n_large_classes: usize,
    /// Article-weighted specialty sizes over all classified publications.
    pub stats: ClassSizeStats,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Ascending by resolution.
    pub rows: Vec<SweepRow>,
    pub selected: usize,
    pub hierarchies: Vec<HierarchicalClassification>,
}

impl SweepResult {
    pub fn selected_row(&self) -> &SweepRow {
        &self.rows[self.selected]
    }

    pub fn selected_hierarchy(&self) -> &HierarchicalClassification {
        &self.hierarchies[self.selected]
    }
}

/// Index of the highest ARI; near-ties go to the earliest (smallest) resolution.
pub fn select_best(aris: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &a) in aris.iter().enumerate() {
        match best {
            Some(b) if a <= aris[b] + ARI_TIE => {}
            _ => best = Some(i),
        }
    }
    best
}

fn run_one(
    input: &SweepInput<'_>,
    config: &SweepConfig,
    resolution: f64,
) -> Result<(SweepRow, HierarchicalClassification), EvaluationError> {
    let cluster = ClusterConfig {
        resolution,
        ..config.cluster.clone()
    };
    let hier = cluster_classes(input.class_graph, &cluster, input.topics)?;
    let specialties = hier.specialties();
    let labeling = Labeling::new_unchecked(input.pubs.to_vec(), specialties.labels().to_vec());
    let derived = derive_classification(&labeling, input.baseline.items())?;
    let comparison = adjusted_rand_index(&derived, input.baseline)?;
    let sizes = specialties.class_sizes();
    let row = SweepRow {
        resolution,
        ari: comparison.ari,
        n_classes: sizes.len(),
        n_large_classes: sizes.iter().filter(|&&s| s >= config.large_class_min).count(),
        stats: class_size_stats(&sizes, Weighting::ByArticle, 0)?,
    };
    log::info!(
        "sweep γ={resolution:e}: {} specialties, ARI {:.6}",
        row.n_classes,
        row.ari
    );
    Ok((row, hier))
}

/// Clusters the class graph at every resolution, scores each specialty
/// partition against the baseline, and selects the best.
pub fn run_sweep(input: SweepInput<'_>, config: &SweepConfig) -> Result<SweepResult, EvaluationError> {
    config.validate()?;
    if input.pubs.len() != input.topics.len() {
        return Err(EvaluationError::ElementMismatch(format!(
            "{} publications for {} topic-partition nodes",
            input.pubs.len(),
            input.topics.len()
        )));
    }
    let mut runs: Vec<(SweepRow, HierarchicalClassification)> = config
        .resolutions
        .par_iter()
        .map(|&r| run_one(&input, config, r))
        .collect::<Result<_, _>>()?;
    runs.sort_by(|a, b| a.0.resolution.total_cmp(&b.0.resolution));

    if let Some(adaptive) = config.adaptive {
        for _ in 0..adaptive.max_extra_runs {
            let aris: Vec<f64> = runs.iter().map(|r| r.0.ari).collect();
            let best = select_best(&aris).expect("non-empty");
            let next = if best + 1 == runs.len() {
                tidy(runs[best].0.resolution + adaptive.step)
            } else if best == 0 && runs[0].0.resolution - adaptive.step > 0.0 {
                tidy(runs[0].0.resolution - adaptive.step)
            } else {
                break;
            };
            let run = run_one(&input, config, next)?;
            if best == 0 && runs.len() > 1 {
                runs.insert(0, run);
            } else {
                runs.push(run);
            }
        }
    }

    let aris: Vec<f64> = runs.iter().map(|r| r.0.ari).collect();
    let selected = select_best(&aris).expect("non-empty");
    let (rows, hierarchies) = runs.into_iter().unzip();
    Ok(SweepResult {
        rows,
        selected,
        hierarchies,
    })
}
