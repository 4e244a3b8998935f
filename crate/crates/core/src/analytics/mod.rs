//! Descriptive statistics and reports over classifications: class size
//! distributions, hierarchy shape, yearly breakdowns, the average-class
//! profile, keyword labels, subject-category case studies and alluvial
//! flow export.

mod alluvial;
mod case_study;
mod labels;
mod profile;
mod stats;

pub use alluvial::{export_alluvial, parse_alluvial, profile_flows, round_half_up, Flow};
pub use case_study::{category_case_study, CaseStudy, CaseStudyRow, CaseStudyTopicRow};
pub use labels::{label_class, label_classes, ClassLabel, KeywordIndex};
pub use profile::{average_class_profile, AverageClassProfile};
pub use stats::{
    class_size_stats, distribution_stats, size_histogram, modal_interval, small_class_share,
    topics_per_specialty, yearly_class_stats, ClassSizeStats, DistributionStats, HistogramBin,
    Weighting, YearRow,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error("no classes left to summarize: {0}")]
    Empty(String),
    #[error(
        "no baseline class is spread over exactly {spread} classes; nearest available counts: {nearest:?}"
    )]
    NoMatchingSpread { spread: usize, nearest: Vec<usize> },
    #[error("unknown subject category {0:?}")]
    UnknownCategory(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Mismatch(String),
}
