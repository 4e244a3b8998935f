use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "citeclass",
    version,
    about = "Two-level publication classification from citation networks"
)]
pub struct Cli {
    /// Ingestion manifest listing the corpus tables.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    /// Output directory for stage artifacts.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Top-level seed; every stage derives its own from it.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Worker threads (0 uses every available core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Accept upstream artifacts whose recorded hashes no longer match.
    #[arg(long, global = true)]
    pub force: bool,

    /// Repeat for more detail (-v info, -vv debug, -vvv trace).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate the corpus and persist the internal id map.
    Ingest,
    /// Cluster the citation network into topics and aggregate the class graph.
    ClusterTopics(ClusterTopicsArgs),
    /// Build the journal-based baseline classification.
    Baseline(BaselineArgs),
    /// Cluster topics into specialties over a resolution ladder scored by ARI.
    Sweep(SweepArgs),
    /// Descriptive statistics of the selected hierarchy.
    Analyze(AnalyzeArgs),
    /// Keyword labels for topics and specialties.
    Label(LabelArgs),
    /// Distribution of a subject category over specialties and topics.
    CaseStudy(CaseStudyArgs),
    /// Generate a corpus with a planted topic/specialty hierarchy.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct ClusterTopicsArgs {
    /// CPM resolution of the topic level.
    #[arg(long)]
    pub resolution: f64,
    #[arg(long, default_value_t = 1)]
    pub random_starts: usize,
    #[arg(long, default_value_t = 100)]
    pub max_iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SizeBasisArg {
    Journals,
    Articles,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    /// Publication year of the journal slice.
    #[arg(long, default_value_t = 2010)]
    pub year: i32,
    /// Subject category whose journals are dropped; repeatable.
    #[arg(long = "exclude-category", default_values_t = ["Multidisciplinary Sciences".to_string()])]
    pub exclude_category: Vec<String>,
    /// Low and high journal-size percentiles, e.g. "5,50".
    #[arg(long, default_value = "5,50", value_parser = parse_percentile_pair)]
    pub size_window: (f64, f64),
    /// Distribution the size percentiles are taken over.
    #[arg(long, value_enum, default_value_t = SizeBasisArg::Journals)]
    pub size_basis: SizeBasisArg,
    /// Minimum self-citation ratio in percent ("10" or "10%").
    #[arg(long, default_value = "10", value_parser = parse_percent)]
    pub self_citation_min: f64,
    /// Overlap that links two journals, in percent.
    #[arg(long, default_value = "8", value_parser = parse_percent)]
    pub overlap_threshold: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 5e-7)]
    pub ladder_start: f64,
    #[arg(long, default_value_t = 5e-7)]
    pub ladder_step: f64,
    #[arg(long, default_value_t = 6)]
    pub ladder_count: usize,
    /// Explicit comma-separated resolutions; overrides the ladder flags.
    #[arg(long, value_delimiter = ',')]
    pub resolutions: Option<Vec<f64>>,
    /// Extend the ladder by this step while the best run sits on an endpoint.
    #[arg(long)]
    pub adaptive_step: Option<f64>,
    #[arg(long, default_value_t = 6)]
    pub adaptive_max: usize,
    #[arg(long, default_value_t = 500)]
    pub large_class_min: u64,
    #[arg(long, default_value_t = 1)]
    pub random_starts: usize,
    #[arg(long, default_value_t = 100)]
    pub max_iterations: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, default_value_t = 500)]
    pub specialty_min: u64,
    #[arg(long, default_value_t = 50)]
    pub topic_min: u64,
    /// Classes strictly below this size count as small.
    #[arg(long, default_value_t = 500)]
    pub small_threshold: u64,
    /// Only classes of at least this size enter the size statistics.
    #[arg(long, default_value_t = 1)]
    pub min_size: u64,
    /// Year range of the yearly table, e.g. "2006-2015"; defaults to the
    /// years present in the hierarchy.
    #[arg(long, value_parser = parse_years)]
    pub years: Option<RangeInclusive<i32>>,
    /// Bin width of the journal-size histogram.
    #[arg(long, default_value_t = 10)]
    pub histogram_width: u64,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Keyword components per label.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct CaseStudyArgs {
    #[arg(long)]
    pub category: String,
    #[arg(long, default_value = "2011-2015", value_parser = parse_years)]
    pub years: RangeInclusive<i32>,
    /// Specialties whose topics are listed, and topics per specialty.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 4)]
    pub specialties: usize,
    /// Topics per specialty, a count or a range such as "4-6".
    #[arg(long, default_value = "5", value_parser = parse_count_range)]
    pub topics: RangeInclusive<usize>,
    #[arg(long, default_value = "60", value_parser = parse_count_range)]
    pub articles_per_topic: RangeInclusive<usize>,
    #[arg(long, default_value_t = 0.15)]
    pub p_topic: f64,
    #[arg(long, default_value_t = 0.02)]
    pub p_specialty: f64,
    #[arg(long, default_value_t = 0.001)]
    pub p_background: f64,
    #[arg(long, default_value_t = 20)]
    pub journals: usize,
    #[arg(long, default_value_t = 0)]
    pub multidisciplinary_journals: usize,
    /// Chance that an article appears in one of its specialty's journals.
    #[arg(long, default_value_t = 0.8)]
    pub purity: f64,
    #[arg(long, default_value = "2010", value_parser = parse_years)]
    pub years: RangeInclusive<i32>,
    #[arg(long, default_value_t = 6)]
    pub keywords_per_topic: usize,
    #[arg(long, default_value_t = 3)]
    pub keywords_per_article: usize,
    /// Write an unstructured throughput corpus of this many publications instead.
    #[arg(long)]
    pub scale_nodes: Option<usize>,
    #[arg(long, default_value_t = 10_000_000)]
    pub scale_edges: usize,
    #[arg(long, default_value_t = 5_000)]
    pub scale_journals: usize,
}

/// Percent notation: "10" and "10%" both mean 0.10.
pub fn parse_percent(s: &str) -> Result<f64, String> {
    let digits = s.trim().trim_end_matches('%').trim();
    let v: f64 = digits
        .parse()
        .map_err(|_| format!("expected a percentage such as 10 or 10%, got {s:?}"))?;
    if !v.is_finite() {
        return Err(format!("percentage must be finite, got {s:?}"));
    }
    Ok(v / 100.0)
}

/// Two percentiles, "low,high", each with an optional "%".
pub fn parse_percentile_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected low,high percentiles, got {s:?}"))?;
    let p = |x: &str| parse_percent(x).map(|v| v * 100.0);
    Ok((p(a)?, p(b)?))
}

/// "2011-2015" or a single year "2010".
pub fn parse_years(s: &str) -> Result<RangeInclusive<i32>, String> {
    let bad = || format!("expected a year or a range such as 2011-2015, got {s:?}");
    let s = s.trim();
    let (a, b) = s.split_once('-').unwrap_or((s, s));
    let a: i32 = a.trim().parse().map_err(|_| bad())?;
    let b: i32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(format!("empty year range {s:?}"));
    }
    Ok(a..=b)
}

pub fn parse_count_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected a count or a range such as 4-6, got {s:?}");
    let s = s.trim();
    let (a, b) = s.split_once('-').unwrap_or((s, s));
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    Ok(a..=b)
}
