//! Publication corpus: publications, citations, journal categories and
//! keywords, indexed by dense internal ids.

mod builder;
mod load;
mod network;

pub use builder::{CorpusBuilder, LoadReport, RowIssue};
pub use load::{
    load_corpus, IngestManifest, ManifestError, CITATIONS_HEADER, JOURNAL_CATEGORIES_HEADER,
    KEYWORDS_HEADER, PUBLICATIONS_HEADER,
};
pub use network::{build_citation_network, normalized_weight, side_contribution, CitationNetwork};

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

/// Dense index of a publication in a [`Corpus`].
pub type PubIdx = u32;
/// Dense index of a journal in a [`Corpus`].
pub type JournalIdx = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DocType {
    Article,
    Review,
    Other,
}

impl DocType {
    /// Articles and reviews both count as articles.
    pub fn is_article(self) -> bool {
        matches!(self, DocType::Article | DocType::Review)
    }
}

impl FromStr for DocType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        // Any other non-empty document type (letter, editorial, ...) is Other.
        match s.trim().to_ascii_lowercase().as_str() {
            "" => Err("empty doc_type".to_string()),
            "article" => Ok(DocType::Article),
            "review" => Ok(DocType::Review),
            _ => Ok(DocType::Other),
        }
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DocType::Article => "Article",
            DocType::Review => "Review",
            DocType::Other => "Other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Publication {
    pub id: String,
    pub year: i32,
    pub doc_type: DocType,
    pub journal: Option<JournalIdx>,
}

/// What to do with relation rows that reference unknown publications or
/// journals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DanglingPolicy {
    Reject,
    #[default]
    Drop,
}

impl FromStr for DanglingPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "reject" => Ok(DanglingPolicy::Reject),
            "drop" | "drop-with-warning" => Ok(DanglingPolicy::Drop),
            other => Err(format!("unknown dangling policy {other:?}")),
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{}:{line}: {message}", file.display())]
    Malformed {
        file: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}:{line}: unknown id {id:?}", file.display())]
    Dangling {
        file: PathBuf,
        line: usize,
        id: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Manifest(#[from] ManifestError),
}

/// An immutable, fully cross-referenced corpus.
#[derive(Debug, Clone)]
pub struct Corpus {
    publications: Vec<Publication>,
    pub_index: HashMap<String, PubIdx>,
    journals: Vec<String>,
    journal_index: HashMap<String, JournalIdx>,
    categories: Vec<String>,
    journal_categories: Vec<Vec<u32>>,
    // (citing, cited), sorted and unique; `ref_offsets` indexes it by citing pub.
    citations: Vec<(PubIdx, PubIdx)>,
    ref_offsets: Vec<usize>,
    keywords: Vec<String>,
    pub_keywords: Vec<Vec<u32>>,
}

impl Corpus {
    pub fn publication_count(&self) -> usize {
        self.publications.len()
    }

    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn publication(&self, idx: PubIdx) -> &Publication {
        &self.publications[idx as usize]
    }

    pub fn pub_index(&self, id: &str) -> Option<PubIdx> {
        self.pub_index.get(id).copied()
    }

    pub fn pub_id(&self, idx: PubIdx) -> &str {
        &self.publications[idx as usize].id
    }

    pub fn journal_count(&self) -> usize {
        self.journals.len()
    }

    pub fn journal_id(&self, idx: JournalIdx) -> &str {
        &self.journals[idx as usize]
    }

    pub fn journal_index(&self, id: &str) -> Option<JournalIdx> {
        self.journal_index.get(id).copied()
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn category_index(&self, name: &str) -> Option<u32> {
        self.categories
            .iter()
            .position(|c| c == name)
            .map(|i| i as u32)
    }

    /// Category indices assigned to a journal.
    pub fn journal_categories(&self, journal: JournalIdx) -> &[u32] {
        &self.journal_categories[journal as usize]
    }

    pub fn journal_in_category(&self, journal: JournalIdx, category: u32) -> bool {
        self.journal_categories[journal as usize].contains(&category)
    }

    pub fn citation_count(&self) -> usize {
        self.citations.len()
    }

    /// All `(citing, cited)` pairs, sorted.
    pub fn citations(&self) -> &[(PubIdx, PubIdx)] {
        &self.citations
    }

    /// Publications cited by `idx`, ascending.
    pub fn references(&self, idx: PubIdx) -> impl ExactSizeIterator<Item = PubIdx> + '_ {
        let i = idx as usize;
        self.citations[self.ref_offsets[i]..self.ref_offsets[i + 1]]
            .iter()
            .map(|&(_, cited)| cited)
    }

    pub fn keyword(&self, idx: u32) -> &str {
        &self.keywords[idx as usize]
    }

    pub fn keyword_vocabulary(&self) -> &[String] {
        &self.keywords
    }

    /// Distinct keyword indices of a publication.
    pub fn pub_keywords(&self, idx: PubIdx) -> &[u32] {
        &self.pub_keywords[idx as usize]
    }

    pub fn keyword_assignment_count(&self) -> usize {
        self.pub_keywords.iter().map(Vec::len).sum()
    }
}

/// A subset of a corpus's publications, ascending by index.
#[derive(Debug, Clone)]
pub struct CorpusView<'a> {
    corpus: &'a Corpus,
    pubs: Vec<PubIdx>,
}

impl<'a> CorpusView<'a> {
    pub fn new(corpus: &'a Corpus, mut pubs: Vec<PubIdx>) -> Self {
        pubs.sort_unstable();
        pubs.dedup();
        Self { corpus, pubs }
    }

    pub fn corpus(&self) -> &'a Corpus {
        self.corpus
    }

    pub fn pubs(&self) -> &[PubIdx] {
        &self.pubs
    }

    pub fn len(&self) -> usize {
        self.pubs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pubs.is_empty()
    }
}

/// Restricts a corpus to articles and reviews.
pub fn filter_articles(corpus: &Corpus) -> CorpusView<'_> {
    let pubs = corpus
        .publications
        .iter()
        .enumerate()
        .filter(|(_, p)| p.doc_type.is_article())
        .map(|(i, _)| i as PubIdx)
        .collect();
    CorpusView { corpus, pubs }
}
