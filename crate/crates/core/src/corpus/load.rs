use std::path::{Path, PathBuf};

use log::{info, warn};
use thiserror::Error;

use super::{Corpus, CorpusBuilder, CorpusError, DanglingPolicy, DocType, LoadReport, RowIssue};
use crate::io::tsv::{for_each_row, TsvError};

pub const PUBLICATIONS_HEADER: [&str; 4] = ["pub_id", "year", "doc_type", "journal_id"];
pub const CITATIONS_HEADER: [&str; 2] = ["citing_id", "cited_id"];
pub const JOURNAL_CATEGORIES_HEADER: [&str; 2] = ["journal_id", "category_name"];
pub const KEYWORDS_HEADER: [&str; 2] = ["pub_id", "keyword"];

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("manifest is missing required key {0:?}")]
    Missing(&'static str),
}

/// Ingestion manifest: the input table paths plus ingestion policies.
///
/// Text format, one `key = value` per line, `#` starts a comment:
///
/// ```text
/// publications = publications.tsv
/// citations = citations.tsv
/// journal_categories = journal_categories.tsv
/// keywords = keywords.tsv
/// node_map = node_map.tsv
/// dangling = drop
/// year_min = 1900
/// year_max = 2100
/// ```
///
/// Relative paths resolve against the manifest's directory. `node_map` names
/// where the dense internal id mapping is persisted.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestManifest {
    pub publications: PathBuf,
    pub citations: PathBuf,
    pub journal_categories: PathBuf,
    pub keywords: PathBuf,
    pub node_map: PathBuf,
    pub dangling: DanglingPolicy,
    pub year_min: i32,
    pub year_max: i32,
}

impl IngestManifest {
    /// Manifest with the conventional file names under `dir`.
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            publications: dir.join("publications.tsv"),
            citations: dir.join("citations.tsv"),
            journal_categories: dir.join("journal_categories.tsv"),
            keywords: dir.join("keywords.tsv"),
            node_map: dir.join("node_map.tsv"),
            dangling: DanglingPolicy::Drop,
            year_min: 1900,
            year_max: 2100,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, ManifestError> {
        let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, ManifestError> {
        let mut publications = None;
        let mut citations = None;
        let mut journal_categories = None;
        let mut keywords = None;
        let mut node_map = None;
        let mut dangling = DanglingPolicy::Drop;
        let mut year_min = 1900;
        let mut year_max = 2100;

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| ManifestError::Syntax {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let path = || base.join(value);
            match key {
                "publications" => publications = Some(path()),
                "citations" => citations = Some(path()),
                "journal_categories" => journal_categories = Some(path()),
                "keywords" => keywords = Some(path()),
                "node_map" => node_map = Some(path()),
                "dangling" => dangling = value.parse().map_err(syntax)?,
                "year_min" => {
                    year_min = value
                        .parse()
                        .map_err(|_| syntax(format!("invalid year_min {value:?}")))?
                }
                "year_max" => {
                    year_max = value
                        .parse()
                        .map_err(|_| syntax(format!("invalid year_max {value:?}")))?
                }
                other => return Err(syntax(format!("unknown key {other:?}"))),
            }
        }
        if year_min > year_max {
            return Err(ManifestError::Syntax {
                line: 0,
                message: format!("year_min {year_min} exceeds year_max {year_max}"),
            });
        }
        Ok(Self {
            publications: publications.ok_or(ManifestError::Missing("publications"))?,
            citations: citations.ok_or(ManifestError::Missing("citations"))?,
            journal_categories: journal_categories
                .ok_or(ManifestError::Missing("journal_categories"))?,
            keywords: keywords.ok_or(ManifestError::Missing("keywords"))?,
            node_map: node_map.unwrap_or_else(|| base.join("node_map.tsv")),
            dangling,
            year_min,
            year_max,
        })
    }

    /// Renders the manifest with paths relative to `base` where possible.
    pub fn to_text(&self, base: &Path) -> String {
        let rel = |p: &Path| {
            p.strip_prefix(base)
                .unwrap_or(p)
                .to_string_lossy()
                .into_owned()
        };
        let policy = match self.dangling {
            DanglingPolicy::Drop => "drop",
            DanglingPolicy::Reject => "reject",
        };
        format!(
            "publications = {}\ncitations = {}\njournal_categories = {}\nkeywords = {}\nnode_map = {}\ndangling = {}\nyear_min = {}\nyear_max = {}\n",
            rel(&self.publications),
            rel(&self.citations),
            rel(&self.journal_categories),
            rel(&self.keywords),
            rel(&self.node_map),
            policy,
            self.year_min,
            self.year_max,
        )
    }

    pub fn input_paths(&self) -> [&Path; 4] {
        [
            &self.publications,
            &self.citations,
            &self.journal_categories,
            &self.keywords,
        ]
    }
}

fn convert(err: TsvError<RowIssue>) -> CorpusError {
    match err {
        TsvError::Io { path, source } => CorpusError::Io { path, source },
        TsvError::Header {
            path,
            expected,
            found,
        } => CorpusError::Malformed {
            file: path,
            line: 1,
            message: format!("expected header {expected:?}, found {found:?}"),
        },
        TsvError::FieldCount {
            path,
            line,
            expected,
            found,
        } => CorpusError::Malformed {
            file: path,
            line,
            message: format!("expected {expected} fields, found {found}"),
        },
        TsvError::Row {
            path,
            line,
            error: RowIssue::Malformed(message),
        } => CorpusError::Malformed {
            file: path,
            line,
            message,
        },
        TsvError::Row {
            path,
            line,
            error: RowIssue::Dangling(id),
        } => CorpusError::Dangling {
            file: path,
            line,
            id,
        },
    }
}

/// Applies `result` under the dangling policy: under `Drop`, a dangling id
/// becomes a warning and the row is skipped.
fn apply(
    builder: &mut CorpusBuilder,
    policy: DanglingPolicy,
    file: &Path,
    line: usize,
    result: Result<(), RowIssue>,
) -> Result<(), RowIssue> {
    match result {
        Err(RowIssue::Dangling(id)) if policy == DanglingPolicy::Drop => {
            builder.note_dangling(format!("{}:{line}: dropped row with unknown id {id:?}", file.display()));
            Ok(())
        }
        other => other,
    }
}

/// Loads and cross-references the four corpus tables named by `manifest`.
pub fn load_corpus(manifest: &IngestManifest) -> Result<(Corpus, LoadReport), CorpusError> {
    let mut b = CorpusBuilder::with_year_range(manifest.year_min, manifest.year_max);
    let policy = manifest.dangling;

    for_each_row(&manifest.publications, &PUBLICATIONS_HEADER, |_, f| {
        let year: i32 = f[1]
            .trim()
            .parse()
            .map_err(|_| RowIssue::Malformed(format!("invalid year {:?}", f[1])))?;
        let doc_type: DocType = f[2].parse().map_err(RowIssue::Malformed)?;
        let journal = Some(f[3]).filter(|j| !j.trim().is_empty());
        b.add_publication(f[0], year, doc_type, journal)
    })
    .map_err(convert)?;

    let path = manifest.citations.as_path();
    for_each_row(path, &CITATIONS_HEADER, |line, f| {
        let r = b.add_citation(f[0], f[1]);
        apply(&mut b, policy, path, line, r)
    })
    .map_err(convert)?;

    let path = manifest.journal_categories.as_path();
    for_each_row(path, &JOURNAL_CATEGORIES_HEADER, |line, f| {
        let r = b.add_journal_category(f[0], f[1]);
        apply(&mut b, policy, path, line, r)
    })
    .map_err(convert)?;

    let path = manifest.keywords.as_path();
    for_each_row(path, &KEYWORDS_HEADER, |line, f| {
        let r = b.add_keyword(f[0], f[1]);
        apply(&mut b, policy, path, line, r)
    })
    .map_err(convert)?;

    let (corpus, report) = b.finish();
    if report.dangling_dropped > 0 {
        warn!(
            "dropped {} relation rows referencing unknown ids",
            report.dangling_dropped
        );
    }
    info!(
        "loaded {} publications, {} citations, {} journals, {} categories, {} keyword assignments",
        report.publications,
        report.citations,
        report.journals,
        report.categories,
        report.keyword_assignments
    );
    Ok((corpus, report))
}
