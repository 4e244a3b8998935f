//! Keyword labels for classes.
//!
//! A keyword scores `in-class occurrences × ln(N / df)`, where `N` is the
//! number of publications with at least one keyword and `df` the number
//! bearing that keyword. Ties go to the higher in-class count, then to the
//! lexicographically smaller keyword.

use std::collections::HashMap;

use crate::corpus::{Corpus, PubIdx};
use crate::evaluation::Labeling;

pub const LABEL_SEPARATOR: &str = "//";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLabel {
    pub class_id: u32,
    /// Empty when no member carries a keyword.
    pub label: String,
}

/// Corpus-wide keyword document frequencies.
#[derive(Debug, Clone)]
pub struct KeywordIndex {
    with_keywords: u64,
    document_frequency: Vec<u64>,
}

impl KeywordIndex {
    pub fn new(corpus: &Corpus) -> Self {
        let mut document_frequency = vec![0u64; corpus.keyword_vocabulary().len()];
        let mut with_keywords = 0;
        for p in 0..corpus.publication_count() as PubIdx {
            let kws = corpus.pub_keywords(p);
            if !kws.is_empty() {
                with_keywords += 1;
            }
            for &k in kws {
                document_frequency[k as usize] += 1;
            }
        }
        Self {
            with_keywords,
            document_frequency,
        }
    }

    fn specificity(&self, keyword: u32) -> f64 {
        (self.with_keywords as f64 / self.document_frequency[keyword as usize] as f64).ln()
    }
}

/// Label of one class from its members' keywords, at most `k` components.
pub fn label_class(
    corpus: &Corpus,
    index: &KeywordIndex,
    class_id: u32,
    members: &[PubIdx],
    k: usize,
) -> ClassLabel {
    let mut counts: HashMap<u32, u64> = HashMap::new();
    for &p in members {
        for &kw in corpus.pub_keywords(p) {
            *counts.entry(kw).or_default() += 1;
        }
    }
    let mut scored: Vec<(f64, u64, &str)> = counts
        .into_iter()
        .map(|(kw, n)| (n as f64 * index.specificity(kw), n, corpus.keyword(kw)))
        .collect();
    scored.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(b.1.cmp(&a.1))
            .then_with(|| a.2.cmp(b.2))
    });
    if scored.is_empty() {
        log::warn!("class {class_id} has no keywords; label left empty");
    }
    let label = scored
        .iter()
        .take(k)
        .map(|(_, _, kw)| kw.to_uppercase())
        .collect::<Vec<_>>()
        .join(LABEL_SEPARATOR);
    ClassLabel { class_id, label }
}

/// Labels for every class of `classes`, ascending by class id.
pub fn label_classes(corpus: &Corpus, classes: &Labeling, k: usize) -> Vec<ClassLabel> {
    let index = KeywordIndex::new(corpus);
    classes
        .classes()
        .into_iter()
        .map(|(class_id, members)| label_class(corpus, &index, class_id, &members, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CorpusBuilder, DocType};

    fn corpus(keywords: &[(&str, &str)], pubs: usize) -> Corpus {
        let mut b = CorpusBuilder::default();
        for i in 0..pubs {
            b.add_publication(&format!("p{i}"), 2010, DocType::Article, None)
                .unwrap();
        }
        for (p, kw) in keywords {
            b.add_keyword(p, kw).unwrap();
        }
        b.finish().0
    }

    #[test]
    fn exclusive_keyword_ranks_first() {
        let c = corpus(
            &[
                ("p0", "citation analysis"),
                ("p1", "citation analysis"),
                ("p0", "science"),
                ("p2", "science"),
                ("p3", "science"),
                ("p2", "networks"),
            ],
            4,
        );
        let l = label_classes(&c, &Labeling::new(vec![0, 1, 2, 3], vec![0, 0, 1, 1]).unwrap(), 3);
        assert_eq!(l[0].label, "CITATION ANALYSIS//SCIENCE");
        assert_eq!(l[1].label, "NETWORKS//SCIENCE");
    }

    #[test]
    fn truncates_to_k() {
        let c = corpus(&[("p0", "a"), ("p0", "b"), ("p0", "c"), ("p1", "d")], 2);
        let l = label_classes(&c, &Labeling::new(vec![0], vec![5]).unwrap(), 2);
        assert_eq!(l[0].class_id, 5);
        assert_eq!(l[0].label.split(LABEL_SEPARATOR).count(), 2);
    }

    #[test]
    fn uniform_keywords_fall_back_to_frequency_then_name() {
        // Every keyword appears on every publication: all scores are zero.
        let mut kws = Vec::new();
        for p in ["p0", "p1", "p2"] {
            for kw in ["zeta", "alpha", "mid"] {
                kws.push((p, kw));
            }
        }
        let c = corpus(&kws, 3);
        let l = label_classes(&c, &Labeling::new(vec![0, 1], vec![0, 0]).unwrap(), 3);
        assert_eq!(l[0].label, "ALPHA//MID//ZETA");
    }

    #[test]
    fn class_without_keywords_gets_empty_label() {
        let c = corpus(&[("p0", "x")], 2);
        let l = label_classes(&c, &Labeling::new(vec![1], vec![0]).unwrap(), 3);
        assert_eq!(l[0].label, "");
    }
}
