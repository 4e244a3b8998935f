use std::collections::HashMap;
use std::ops::RangeInclusive;

use super::AnalyticsError;
use crate::cluster::PublicationHierarchy;
use crate::corpus::Corpus;

#[derive(Debug, Clone, PartialEq)]
pub struct CaseStudyRow {
    pub rank: usize,
    pub specialty: u32,
    /// Category articles in the specialty.
    pub count: u64,
    /// All specialty articles in the same period.
    pub total: u64,
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseStudyTopicRow {
    pub specialty: u32,
    pub rank: usize,
    pub topic: u32,
    pub count: u64,
    pub total: u64,
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseStudy {
    pub category: String,
    /// Classified articles in the category's journals within the period.
    pub category_articles: u64,
    /// Every specialty with at least one category article, by count.
    pub specialties: Vec<CaseStudyRow>,
    /// Leading topics of the `top_n` leading specialties.
    pub topics: Vec<CaseStudyTopicRow>,
}

/// Distributes the articles of a subject category over specialties and,
/// for the leading specialties, over their topics.
pub fn category_case_study(
    corpus: &Corpus,
    hier: &PublicationHierarchy,
    category: &str,
    years: RangeInclusive<i32>,
    top_n: usize,
) -> Result<CaseStudy, AnalyticsError> {
    let cat = corpus
        .category_index(category)
        .ok_or_else(|| AnalyticsError::UnknownCategory(category.to_string()))?;

    let mut spec_total: HashMap<u32, u64> = HashMap::new();
    let mut spec_count: HashMap<u32, u64> = HashMap::new();
    let mut topic_total: HashMap<u32, u64> = HashMap::new();
    let mut topic_count: HashMap<u32, (u32, u64)> = HashMap::new();
    let mut category_articles = 0;
    for (p, topic, specialty) in hier.rows() {
        let publication = corpus.publication(p);
        if !years.contains(&publication.year) {
            continue;
        }
        *spec_total.entry(specialty).or_default() += 1;
        *topic_total.entry(topic).or_default() += 1;
        let in_category = publication
            .journal
            .is_some_and(|j| corpus.journal_in_category(j, cat));
        if in_category {
            category_articles += 1;
            *spec_count.entry(specialty).or_default() += 1;
            topic_count.entry(topic).or_insert((specialty, 0)).1 += 1;
        }
    }

    let mut ranked: Vec<(u32, u64)> = spec_count.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let specialties: Vec<CaseStudyRow> = ranked
        .iter()
        .enumerate()
        .map(|(i, &(specialty, count))| {
            let total = spec_total[&specialty];
            CaseStudyRow {
                rank: i + 1,
                specialty,
                count,
                total,
                share: count as f64 / total as f64,
            }
        })
        .collect();

    let mut topics = Vec::new();
    for row in specialties.iter().take(top_n) {
        let mut inner: Vec<(u32, u64)> = topic_count
            .iter()
            .filter(|(_, (s, _))| *s == row.specialty)
            .map(|(&t, &(_, n))| (t, n))
            .collect();
        inner.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for (i, (topic, count)) in inner.into_iter().take(top_n).enumerate() {
            let total = topic_total[&topic];
            topics.push(CaseStudyTopicRow {
                specialty: row.specialty,
                rank: i + 1,
                topic,
                count,
                total,
                share: count as f64 / total as f64,
            });
        }
    }

    Ok(CaseStudy {
        category: category.to_string(),
        category_articles,
        specialties,
        topics,
    })
}
