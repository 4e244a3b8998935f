//! Journal-based baseline classification.
//!
//! Journals publishing articles in one year are filtered by subject
//! category, by size (a percentile window), by self-citation ratio, and
//! finally collapsed into groups of journals with overlapping reference
//! lists, keeping one journal per group. Each surviving journal's articles
//! form one baseline class.

mod overlap;

pub use overlap::{
    group_overlapping, journal_overlap, overlap_records, Grouping, OverlapRecord,
    ReferenceMultiset,
};

use std::collections::HashSet;

use thiserror::Error;

use crate::corpus::{Corpus, JournalIdx, PubIdx};
use crate::evaluation::Labeling;
use crate::percentile::{nearest_rank, weighted_nearest_rank};

#[derive(Debug, Error, PartialEq)]
pub enum BaselineError {
    #[error("invalid baseline configuration: {0}")]
    InvalidConfig(String),
    #[error("journal {0} has no cited references")]
    NoReferences(JournalIdx),
    #[error("baseline classification is empty after {0}")]
    Empty(&'static str),
}

/// Year-slice profile of one journal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JournalProfile {
    pub journal: JournalIdx,
    /// Articles published in the slice year, ascending.
    pub articles: Vec<PubIdx>,
    /// References from those articles to publications of the same journal.
    pub self_citations: u64,
    /// References from those articles to publications in the corpus.
    pub active_references: u64,
}

impl JournalProfile {
    pub fn size(&self) -> u64 {
        self.articles.len() as u64
    }

    /// `self_citations / active_references`; undefined without references.
    pub fn self_citation_ratio(&self) -> Option<f64> {
        (self.active_references > 0)
            .then(|| self.self_citations as f64 / self.active_references as f64)
    }
}

/// Which distribution the size percentiles are taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SizeBasis {
    /// Every journal counts once.
    #[default]
    Journals,
    /// Every article contributes its journal's size.
    Articles,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineConfig {
    pub year: i32,
    pub excluded_categories: Vec<String>,
    pub size_percentile_low: f64,
    pub size_percentile_high: f64,
    pub size_basis: SizeBasis,
    /// Inclusive lower bound, as a fraction.
    pub self_citation_min: f64,
    /// Inclusive overlap needed to link two journals, as a fraction.
    pub overlap_threshold: f64,
    pub seed: u64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            year: 2010,
            excluded_categories: vec!["Multidisciplinary Sciences".to_string()],
            size_percentile_low: 5.0,
            size_percentile_high: 50.0,
            size_basis: SizeBasis::Journals,
            self_citation_min: 0.10,
            overlap_threshold: 0.08,
            seed: 0,
        }
    }
}

impl BaselineConfig {
    pub fn validate(&self) -> Result<(), BaselineError> {
        let (lo, hi) = (self.size_percentile_low, self.size_percentile_high);
        if !(0.0..=100.0).contains(&lo) || !(0.0..=100.0).contains(&hi) || lo >= hi {
            return Err(BaselineError::InvalidConfig(format!(
                "size percentiles must satisfy 0 <= low < high <= 100, got {lo} and {hi}"
            )));
        }
        for (name, v) in [
            ("self_citation_min", self.self_citation_min),
            ("overlap_threshold", self.overlap_threshold),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(BaselineError::InvalidConfig(format!(
                    "{name} must be a fraction in [0, 1], got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Profiles of every journal with at least one article in `year`,
/// ascending by journal.
pub fn profile_journals(corpus: &Corpus, year: i32) -> Vec<JournalProfile> {
    let mut articles: Vec<Vec<PubIdx>> = vec![Vec::new(); corpus.journal_count()];
    for (idx, p) in corpus.publications().iter().enumerate() {
        if p.year == year && p.doc_type.is_article() {
            if let Some(j) = p.journal {
                articles[j as usize].push(idx as PubIdx);
            }
        }
    }
    articles
        .into_iter()
        .enumerate()
        .filter(|(_, a)| !a.is_empty())
        .map(|(j, articles)| {
            let journal = j as JournalIdx;
            let mut self_citations = 0;
            let mut active_references = 0;
            for &a in &articles {
                for cited in corpus.references(a) {
                    active_references += 1;
                    if corpus.publication(cited).journal == Some(journal) {
                        self_citations += 1;
                    }
                }
            }
            JournalProfile {
                journal,
                articles,
                self_citations,
                active_references,
            }
        })
        .collect()
}

/// Drops journals assigned to any excluded category.
pub fn apply_category_exclusion(
    corpus: &Corpus,
    profiles: Vec<JournalProfile>,
    excluded: &[String],
) -> Vec<JournalProfile> {
    let excluded: HashSet<u32> = excluded
        .iter()
        .filter_map(|name| {
            let idx = corpus.category_index(name);
            if idx.is_none() {
                log::warn!("excluded category {name:?} does not occur in the corpus");
            }
            idx
        })
        .collect();
    let kept: Vec<JournalProfile> = profiles
        .into_iter()
        .filter(|p| {
            !corpus
                .journal_categories(p.journal)
                .iter()
                .any(|c| excluded.contains(c))
        })
        .collect();
    if kept.is_empty() {
        log::warn!("every journal was removed by the category exclusion");
    }
    kept
}

/// Inclusive size bounds produced by the percentile window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeWindow {
    pub min: u64,
    pub max: u64,
}

/// Nearest-rank percentile bounds of the profiles' sizes.
pub fn size_window(profiles: &[JournalProfile], low: f64, high: f64, basis: SizeBasis) -> Option<SizeWindow> {
    let mut sizes: Vec<u64> = profiles.iter().map(JournalProfile::size).collect();
    sizes.sort_unstable();
    match basis {
        SizeBasis::Journals => Some(SizeWindow {
            min: nearest_rank(&sizes, low)?,
            max: nearest_rank(&sizes, high)?,
        }),
        SizeBasis::Articles => {
            let weighted: Vec<(u64, u64)> = sizes.iter().map(|&s| (s, s)).collect();
            Some(SizeWindow {
                min: weighted_nearest_rank(&weighted, low)?,
                max: weighted_nearest_rank(&weighted, high)?,
            })
        }
    }
}

/// Keeps journals whose size lies inside the percentile window.
pub fn apply_size_window(
    profiles: Vec<JournalProfile>,
    config: &BaselineConfig,
) -> (Vec<JournalProfile>, Option<SizeWindow>) {
    let window = size_window(
        &profiles,
        config.size_percentile_low,
        config.size_percentile_high,
        config.size_basis,
    );
    let kept = match window {
        Some(w) => profiles
            .into_iter()
            .filter(|p| (w.min..=w.max).contains(&p.size()))
            .collect(),
        None => profiles,
    };
    (kept, window)
}

/// Keeps journals whose self-citation ratio is defined and at least `min`.
pub fn apply_self_citation_filter(profiles: Vec<JournalProfile>, min: f64) -> Vec<JournalProfile> {
    profiles
        .into_iter()
        .filter(|p| p.self_citation_ratio().is_some_and(|s| s >= min))
        .collect()
}

/// Baseline classes: one per representative journal, restricted to the
/// articles of the topic classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineClassification {
    /// `(journal, articles)`, ascending by journal; articles ascending.
    pub classes: Vec<(JournalIdx, Vec<PubIdx>)>,
    /// Union of the classes, ascending.
    pub articles: Vec<PubIdx>,
}

impl BaselineClassification {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Article → journal labeling over P′.
    pub fn labeling(&self) -> Labeling {
        let mut pairs: Vec<(u32, u32)> = self
            .classes
            .iter()
            .flat_map(|(j, arts)| arts.iter().map(move |&a| (a, *j)))
            .collect();
        pairs.sort_unstable();
        let (items, labels) = pairs.into_iter().unzip();
        Labeling::new_unchecked(items, labels)
    }

    /// Rebuilds from `(journal, article)` rows; an article may appear once.
    pub fn from_rows(mut rows: Vec<(JournalIdx, PubIdx)>) -> Result<Self, BaselineError> {
        rows.sort_unstable();
        let mut articles: Vec<PubIdx> = rows.iter().map(|r| r.1).collect();
        articles.sort_unstable();
        if articles.windows(2).any(|w| w[0] == w[1]) {
            return Err(BaselineError::InvalidConfig(
                "an article belongs to two baseline classes".into(),
            ));
        }
        let mut classes: Vec<(JournalIdx, Vec<PubIdx>)> = Vec::new();
        for (j, a) in rows {
            match classes.last_mut() {
                Some((last, arts)) if *last == j => arts.push(a),
                _ => classes.push((j, vec![a])),
            }
        }
        if classes.is_empty() {
            return Err(BaselineError::Empty("loading"));
        }
        Ok(Self { classes, articles })
    }
}

/// Intersects each representative's articles with `topic_universe`
/// (ascending); classes left empty are dropped.
pub fn build_baseline(
    representatives: &[&JournalProfile],
    topic_universe: &[PubIdx],
) -> Result<BaselineClassification, BaselineError> {
    let mut classes: Vec<(JournalIdx, Vec<PubIdx>)> = representatives
        .iter()
        .filter_map(|p| {
            let kept: Vec<PubIdx> = p
                .articles
                .iter()
                .copied()
                .filter(|a| topic_universe.binary_search(a).is_ok())
                .collect();
            (!kept.is_empty()).then_some((p.journal, kept))
        })
        .collect();
    classes.sort_by_key(|c| c.0);
    if classes.is_empty() {
        return Err(BaselineError::Empty("intersection with the topic classification"));
    }
    let mut articles: Vec<PubIdx> = classes.iter().flat_map(|c| c.1.iter().copied()).collect();
    articles.sort_unstable();
    Ok(BaselineClassification { classes, articles })
}

/// Journal and article counts after one filter stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditStage {
    pub stage: &'static str,
    pub journals: usize,
    pub articles: u64,
}

#[derive(Debug, Clone)]
pub struct BaselineRun {
    pub classification: BaselineClassification,
    pub ladder: Vec<AuditStage>,
    pub size_window: Option<SizeWindow>,
    pub grouping: Grouping,
}

impl BaselineRun {
    /// Representatives before dropping classes without classified articles.
    pub fn representative_count(&self) -> usize {
        self.grouping.representatives.len()
    }
}

fn stage(name: &'static str, profiles: &[JournalProfile]) -> AuditStage {
    AuditStage {
        stage: name,
        journals: profiles.len(),
        articles: profiles.iter().map(JournalProfile::size).sum(),
    }
}

/// Runs the full filter chain and records the audit ladder.
pub fn run_baseline(
    corpus: &Corpus,
    config: &BaselineConfig,
    topic_universe: &[PubIdx],
) -> Result<BaselineRun, BaselineError> {
    config.validate()?;
    let mut ladder = Vec::new();

    let profiles = profile_journals(corpus, config.year);
    ladder.push(stage("year_slice", &profiles));
    let profiles = apply_category_exclusion(corpus, profiles, &config.excluded_categories);
    ladder.push(stage("category_exclusion", &profiles));
    let (profiles, window) = apply_size_window(profiles, config);
    ladder.push(stage("size_window", &profiles));
    let profiles = apply_self_citation_filter(profiles, config.self_citation_min);
    ladder.push(stage("self_citation", &profiles));
    if profiles.is_empty() {
        return Err(BaselineError::Empty("the self-citation filter"));
    }

    let records = overlap_records(corpus, &profiles);
    let journals: Vec<JournalIdx> = profiles.iter().map(|p| p.journal).collect();
    let grouping = group_overlapping(&journals, &records, config.overlap_threshold, config.seed);
    let chosen: HashSet<JournalIdx> = grouping.representatives.iter().copied().collect();
    let reps: Vec<&JournalProfile> = profiles.iter().filter(|p| chosen.contains(&p.journal)).collect();
    ladder.push(AuditStage {
        stage: "overlap_grouping",
        journals: reps.len(),
        articles: reps.iter().map(|p| p.size()).sum(),
    });

    let classification = build_baseline(&reps, topic_universe)?;
    ladder.push(AuditStage {
        stage: "topic_intersection",
        journals: classification.class_count(),
        articles: classification.articles.len() as u64,
    });
    Ok(BaselineRun {
        classification,
        ladder,
        size_window: window,
        grouping,
    })
}
