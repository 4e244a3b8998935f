use std::collections::HashMap;

use super::{Corpus, DocType, JournalIdx, PubIdx, Publication};

/// Why a single input row could not be applied.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RowIssue {
    /// The row references an id that is not in the corpus.
    #[error("unknown id {0:?}")]
    Dangling(String),
    #[error("{0}")]
    Malformed(String),
}

/// Counts gathered while assembling a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub publications: usize,
    pub citations: usize,
    pub journals: usize,
    pub categories: usize,
    pub keyword_assignments: usize,
    pub duplicate_rows: usize,
    pub self_citations_dropped: usize,
    pub dangling_dropped: usize,
    pub empty_keywords_skipped: usize,
    pub warnings: Vec<String>,
}

impl LoadReport {
    /// `(name, count)` pairs in a fixed order, for reporting.
    pub fn counts(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("publications", self.publications),
            ("citations", self.citations),
            ("journals", self.journals),
            ("categories", self.categories),
            ("keyword_assignments", self.keyword_assignments),
            ("duplicate_rows", self.duplicate_rows),
            ("self_citations_dropped", self.self_citations_dropped),
            ("dangling_dropped", self.dangling_dropped),
            ("empty_keywords_skipped", self.empty_keywords_skipped),
        ]
    }
}

/// Incremental corpus assembly. Publications must be added before any
/// relation that references them.
#[derive(Debug)]
pub struct CorpusBuilder {
    year_min: i32,
    year_max: i32,
    publications: Vec<Publication>,
    pub_index: HashMap<String, PubIdx>,
    journals: Vec<String>,
    journal_index: HashMap<String, JournalIdx>,
    categories: Vec<String>,
    category_index: HashMap<String, u32>,
    journal_categories: Vec<Vec<u32>>,
    citations: Vec<(PubIdx, PubIdx)>,
    keywords: Vec<String>,
    keyword_index: HashMap<String, u32>,
    pub_keywords: Vec<Vec<u32>>,
    report: LoadReport,
}

impl Default for CorpusBuilder {
    fn default() -> Self {
        Self::with_year_range(1900, 2100)
    }
}

impl CorpusBuilder {
    pub fn with_year_range(year_min: i32, year_max: i32) -> Self {
        Self {
            year_min,
            year_max,
            publications: Vec::new(),
            pub_index: HashMap::new(),
            journals: Vec::new(),
            journal_index: HashMap::new(),
            categories: Vec::new(),
            category_index: HashMap::new(),
            journal_categories: Vec::new(),
            citations: Vec::new(),
            keywords: Vec::new(),
            keyword_index: HashMap::new(),
            pub_keywords: Vec::new(),
            report: LoadReport::default(),
        }
    }

    pub fn add_publication(
        &mut self,
        id: &str,
        year: i32,
        doc_type: DocType,
        journal: Option<&str>,
    ) -> Result<(), RowIssue> {
        let id = id.trim();
        if id.is_empty() {
            return Err(RowIssue::Malformed("empty pub_id".into()));
        }
        if year < self.year_min || year > self.year_max {
            return Err(RowIssue::Malformed(format!(
                "year {year} outside {}..={}",
                self.year_min, self.year_max
            )));
        }
        let journal = journal.map(str::trim).filter(|j| !j.is_empty());
        match self.pub_index.get(id) {
            Some(&existing) => {
                let p = &self.publications[existing as usize];
                let same_journal = match (p.journal, journal) {
                    (None, None) => true,
                    (Some(j), Some(name)) => self.journals[j as usize] == name,
                    _ => false,
                };
                if p.year == year && p.doc_type == doc_type && same_journal {
                    self.report.duplicate_rows += 1;
                    Ok(())
                } else {
                    Err(RowIssue::Malformed(format!(
                        "pub_id {id:?} repeated with conflicting fields"
                    )))
                }
            }
            None => {
                let journal = journal.map(|name| self.intern_journal(name));
                let idx = self.publications.len() as PubIdx;
                self.publications.push(Publication {
                    id: id.to_string(),
                    year,
                    doc_type,
                    journal,
                });
                self.pub_index.insert(id.to_string(), idx);
                self.pub_keywords.push(Vec::new());
                Ok(())
            }
        }
    }

    fn intern_journal(&mut self, name: &str) -> JournalIdx {
        if let Some(&j) = self.journal_index.get(name) {
            return j;
        }
        let j = self.journals.len() as JournalIdx;
        self.journals.push(name.to_string());
        self.journal_index.insert(name.to_string(), j);
        self.journal_categories.push(Vec::new());
        j
    }

    fn lookup(&self, id: &str) -> Result<PubIdx, RowIssue> {
        let id = id.trim();
        self.pub_index
            .get(id)
            .copied()
            .ok_or_else(|| RowIssue::Dangling(id.to_string()))
    }

    /// Records that `citing` cites `cited`. Self-citations are dropped.
    pub fn add_citation(&mut self, citing: &str, cited: &str) -> Result<(), RowIssue> {
        let a = self.lookup(citing)?;
        let b = self.lookup(cited)?;
        if a == b {
            self.report.self_citations_dropped += 1;
        } else {
            self.citations.push((a, b));
        }
        Ok(())
    }

    pub fn add_journal_category(&mut self, journal: &str, category: &str) -> Result<(), RowIssue> {
        let journal = journal.trim();
        let j = *self
            .journal_index
            .get(journal)
            .ok_or_else(|| RowIssue::Dangling(journal.to_string()))?;
        let category = category.trim();
        if category.is_empty() {
            return Err(RowIssue::Malformed("empty category_name".into()));
        }
        let c = match self.category_index.get(category) {
            Some(&c) => c,
            None => {
                let c = self.categories.len() as u32;
                self.categories.push(category.to_string());
                self.category_index.insert(category.to_string(), c);
                c
            }
        };
        self.journal_categories[j as usize].push(c);
        Ok(())
    }

    /// Attaches a keyword; blank keywords are skipped and counted.
    pub fn add_keyword(&mut self, pub_id: &str, keyword: &str) -> Result<(), RowIssue> {
        let p = self.lookup(pub_id)?;
        let keyword = keyword.trim();
        if keyword.is_empty() {
            self.report.empty_keywords_skipped += 1;
            return Ok(());
        }
        let k = match self.keyword_index.get(keyword) {
            Some(&k) => k,
            None => {
                let k = self.keywords.len() as u32;
                self.keywords.push(keyword.to_string());
                self.keyword_index.insert(keyword.to_string(), k);
                k
            }
        };
        self.pub_keywords[p as usize].push(k);
        Ok(())
    }

    pub(crate) fn note_dangling(&mut self, warning: String) {
        self.report.dangling_dropped += 1;
        if self.report.warnings.len() < 100 {
            self.report.warnings.push(warning);
        }
    }

    pub fn finish(mut self) -> (Corpus, LoadReport) {
        let before = self.citations.len();
        self.citations.sort_unstable();
        self.citations.dedup();
        self.report.duplicate_rows += before - self.citations.len();

        for cats in &mut self.journal_categories {
            let n = cats.len();
            cats.sort_unstable();
            cats.dedup();
            self.report.duplicate_rows += n - cats.len();
        }
        for kws in &mut self.pub_keywords {
            let n = kws.len();
            kws.sort_unstable();
            kws.dedup();
            self.report.duplicate_rows += n - kws.len();
        }

        let n = self.publications.len();
        let mut ref_offsets = vec![0usize; n + 1];
        for &(citing, _) in &self.citations {
            ref_offsets[citing as usize + 1] += 1;
        }
        for i in 0..n {
            ref_offsets[i + 1] += ref_offsets[i];
        }

        let mut report = self.report;
        report.publications = n;
        report.citations = self.citations.len();
        report.journals = self.journals.len();
        report.categories = self.categories.len();
        report.keyword_assignments = self.pub_keywords.iter().map(Vec::len).sum();

        let corpus = Corpus {
            publications: self.publications,
            pub_index: self.pub_index,
            journals: self.journals,
            journal_index: self.journal_index,
            categories: self.categories,
            journal_categories: self.journal_categories,
            citations: self.citations,
            ref_offsets,
            keywords: self.keywords,
            pub_keywords: self.pub_keywords,
        };
        (corpus, report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_collapsed_and_counted() {
        let mut b = CorpusBuilder::default();
        b.add_publication("a", 2010, DocType::Article, Some("J")).unwrap();
        b.add_publication("a", 2010, DocType::Article, Some("J")).unwrap();
        b.add_publication("b", 2010, DocType::Article, Some("J")).unwrap();
        b.add_citation("a", "b").unwrap();
        b.add_citation("a", "b").unwrap();
        b.add_keyword("a", "x").unwrap();
        b.add_keyword("a", " x ").unwrap();
        let (corpus, report) = b.finish();
        assert_eq!(corpus.publication_count(), 2);
        assert_eq!(corpus.citation_count(), 1);
        assert_eq!(corpus.pub_keywords(0).len(), 1);
        assert_eq!(report.duplicate_rows, 3);
    }

    #[test]
    fn conflicting_duplicate_is_malformed() {
        let mut b = CorpusBuilder::default();
        b.add_publication("a", 2010, DocType::Article, None).unwrap();
        assert!(matches!(
            b.add_publication("a", 2011, DocType::Article, None),
            Err(RowIssue::Malformed(_))
        ));
    }

    #[test]
    fn self_citation_dropped() {
        let mut b = CorpusBuilder::default();
        b.add_publication("a", 2010, DocType::Article, None).unwrap();
        b.add_citation("a", "a").unwrap();
        let (corpus, report) = b.finish();
        assert_eq!(corpus.citation_count(), 0);
        assert_eq!(report.self_citations_dropped, 1);
    }

    #[test]
    fn unknown_ids_are_dangling() {
        let mut b = CorpusBuilder::default();
        b.add_publication("a", 2010, DocType::Article, Some("J")).unwrap();
        assert_eq!(
            b.add_citation("a", "zz"),
            Err(RowIssue::Dangling("zz".into()))
        );
        assert_eq!(
            b.add_journal_category("K", "Cat"),
            Err(RowIssue::Dangling("K".into()))
        );
        assert!(b.add_journal_category("J", "Cat").is_ok());
    }

    #[test]
    fn year_range_enforced() {
        let mut b = CorpusBuilder::default();
        assert!(b.add_publication("a", 1800, DocType::Article, None).is_err());
        let mut b = CorpusBuilder::with_year_range(1700, 1900);
        assert!(b.add_publication("a", 1800, DocType::Article, None).is_ok());
    }

    #[test]
    fn blank_keyword_skipped() {
        let mut b = CorpusBuilder::default();
        b.add_publication("a", 2010, DocType::Article, None).unwrap();
        b.add_keyword("a", "   ").unwrap();
        let (corpus, report) = b.finish();
        assert_eq!(corpus.keyword_assignment_count(), 0);
        assert_eq!(report.empty_keywords_skipped, 1);
    }
}
