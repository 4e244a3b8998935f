mod pipeline;
mod reports;
mod synth;

use std::path::PathBuf;

use citeclass::corpus::IngestManifest;
use citeclass::seed;

use crate::error::CliError;
use crate::workspace::Workspace;

pub use pipeline::{cmd_baseline, cmd_cluster_topics, cmd_ingest, cmd_sweep};
pub use reports::{cmd_analyze, cmd_case_study, cmd_label};
pub use synth::cmd_synth;

/// Artifact names inside the output directory.
pub mod artifact {
    pub const INGEST_REPORT: &str = "ingest_report.tsv";
    pub const TOPICS: &str = "topics.tsv";
    pub const CLASS_GRAPH: &str = "class_graph.tsv";
    pub const BASELINE: &str = "baseline.tsv";
    pub const BASELINE_AUDIT: &str = "baseline_audit.tsv";
    pub const SWEEP_REPORT: &str = "sweep_report.tsv";
    pub const HIERARCHY: &str = "hierarchy.tsv";
    pub const CLASS_SIZES: &str = "class_sizes.tsv";
    pub const TOPICS_PER_SPECIALTY: &str = "topics_per_specialty.tsv";
    pub const YEARLY: &str = "yearly.tsv";
    pub const PROFILE: &str = "average_class_profile.tsv";
    pub const PROFILE_SUMMARY: &str = "average_class_profile_summary.tsv";
    pub const ALLUVIAL: &str = "alluvial.txt";
    pub const ALLUVIAL_TSV: &str = "alluvial.tsv";
    pub const JOURNAL_HISTOGRAM: &str = "journal_size_histogram.tsv";
    pub const TOPIC_LABELS: &str = "topic_labels.tsv";
    pub const SPECIALTY_LABELS: &str = "specialty_labels.tsv";
    pub const CASE_SPECIALTIES: &str = "case_study_specialties.tsv";
    pub const CASE_TOPICS: &str = "case_study_topics.tsv";
}

/// Settings shared by every stage.
pub struct Context<'a> {
    pub ws: &'a Workspace,
    pub manifest: Option<PathBuf>,
    pub seed: u64,
}

impl Context<'_> {
    pub fn manifest(&self) -> Result<IngestManifest, CliError> {
        let path = self
            .manifest
            .as_ref()
            .ok_or_else(|| CliError::Usage("this subcommand needs --manifest <path>".into()))?;
        if !path.exists() {
            return Err(CliError::Data(format!("manifest {} does not exist", path.display())));
        }
        Ok(IngestManifest::from_file(path)?)
    }

    pub fn stage_seed(&self, stage: &str) -> u64 {
        seed::derive(self.seed, stage)
    }
}

fn with_tabs(fields: &[&str]) -> String {
    fields.join("\t")
}
