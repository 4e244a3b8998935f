//! Shared cited references between journals and overlap grouping.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;

use super::{BaselineError, JournalProfile};
use crate::corpus::{Corpus, JournalIdx, PubIdx};

/// A journal's concatenated reference lists: `(cited, multiplicity)`,
/// ascending by cited publication.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReferenceMultiset {
    entries: Vec<(PubIdx, u64)>,
    total: u64,
}

impl ReferenceMultiset {
    pub fn from_cited<I: IntoIterator<Item = PubIdx>>(cited: I) -> Self {
        let mut all: Vec<PubIdx> = cited.into_iter().collect();
        all.sort_unstable();
        let total = all.len() as u64;
        let mut entries: Vec<(PubIdx, u64)> = Vec::new();
        for c in all {
            match entries.last_mut() {
                Some((last, n)) if *last == c => *n += 1,
                _ => entries.push((c, 1)),
            }
        }
        Self { entries, total }
    }

    /// References of the profile's year-slice articles.
    pub fn of(corpus: &Corpus, profile: &JournalProfile) -> Self {
        Self::from_cited(profile.articles.iter().flat_map(|&p| corpus.references(p)))
    }

    pub fn entries(&self) -> &[(PubIdx, u64)] {
        &self.entries
    }

    /// Number of references counted with multiplicity.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Σ over cited items of the smaller multiplicity.
    pub fn shared_with(&self, other: &ReferenceMultiset) -> u64 {
        let (mut i, mut j, mut m) = (0, 0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    m += a[i].1.min(b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapRecord {
    pub journal_a: JournalIdx,
    pub journal_b: JournalIdx,
    pub shared: u64,
    pub refs_a: u64,
    pub refs_b: u64,
    /// `½ (shared/refs_a + shared/refs_b)`
    pub overlap: f64,
}

fn overlap_value(shared: u64, refs_a: u64, refs_b: u64) -> f64 {
    0.5 * (shared as f64 / refs_a as f64 + shared as f64 / refs_b as f64)
}

/// Overlap between two journals' reference lists.
pub fn journal_overlap(
    journal_a: JournalIdx,
    refs_a: &ReferenceMultiset,
    journal_b: JournalIdx,
    refs_b: &ReferenceMultiset,
) -> Result<OverlapRecord, BaselineError> {
    for (j, r) in [(journal_a, refs_a), (journal_b, refs_b)] {
        if r.total() == 0 {
            return Err(BaselineError::NoReferences(j));
        }
    }
    let shared = refs_a.shared_with(refs_b);
    Ok(OverlapRecord {
        journal_a,
        journal_b,
        shared,
        refs_a: refs_a.total(),
        refs_b: refs_b.total(),
        overlap: overlap_value(shared, refs_a.total(), refs_b.total()),
    })
}

/// Overlap records for every journal pair sharing at least one cited
/// publication, ordered by `(journal_a, journal_b)` with `journal_a < journal_b`.
/// Pairs without shared references have zero overlap and are not listed.
pub fn overlap_records(corpus: &Corpus, profiles: &[JournalProfile]) -> Vec<OverlapRecord> {
    let mut order: Vec<usize> = (0..profiles.len()).collect();
    order.sort_by_key(|&i| profiles[i].journal);
    let refs: Vec<ReferenceMultiset> = order
        .par_iter()
        .map(|&i| ReferenceMultiset::of(corpus, &profiles[i]))
        .collect();
    let journals: Vec<JournalIdx> = order.iter().map(|&i| profiles[i].journal).collect();

    let mut index: HashMap<PubIdx, Vec<(usize, u64)>> = HashMap::new();
    for (pos, r) in refs.iter().enumerate() {
        for &(cited, n) in r.entries() {
            index.entry(cited).or_default().push((pos, n));
        }
    }

    let per_journal: Vec<Vec<OverlapRecord>> = (0..refs.len())
        .into_par_iter()
        .map(|a| {
            let mut shared: HashMap<usize, u64> = HashMap::new();
            for &(cited, n) in refs[a].entries() {
                for &(b, m) in &index[&cited] {
                    if b > a {
                        *shared.entry(b).or_default() += n.min(m);
                    }
                }
            }
            let mut out: Vec<OverlapRecord> = shared
                .into_iter()
                .map(|(b, m)| OverlapRecord {
                    journal_a: journals[a],
                    journal_b: journals[b],
                    shared: m,
                    refs_a: refs[a].total(),
                    refs_b: refs[b].total(),
                    overlap: overlap_value(m, refs[a].total(), refs[b].total()),
                })
                .collect();
            out.sort_by_key(|r| r.journal_b);
            out
        })
        .collect();
    per_journal.into_iter().flatten().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    /// Connected components, each ascending, ordered by smallest member.
    pub components: Vec<Vec<JournalIdx>>,
    /// One journal per component, parallel to `components`.
    pub representatives: Vec<JournalIdx>,
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Groups journals connected by overlaps of at least `threshold`
/// (transitively) and draws one representative per group.
pub fn group_overlapping(
    journals: &[JournalIdx],
    records: &[OverlapRecord],
    threshold: f64,
    seed: u64,
) -> Grouping {
    let mut sorted = journals.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let pos: HashMap<JournalIdx, usize> = sorted.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let mut sets = DisjointSet::new(sorted.len());
    for r in records.iter().filter(|r| r.overlap >= threshold) {
        if let (Some(&a), Some(&b)) = (pos.get(&r.journal_a), pos.get(&r.journal_b)) {
            sets.union(a, b);
        }
    }
    let mut by_root: HashMap<usize, Vec<JournalIdx>> = HashMap::new();
    for (i, &j) in sorted.iter().enumerate() {
        let root = sets.find(i);
        by_root.entry(root).or_default().push(j);
    }
    let mut components: Vec<Vec<JournalIdx>> = by_root.into_values().collect();
    components.sort_by_key(|c| c[0]);
    let mut rng = crate::seed::rng(seed);
    let representatives = components
        .iter()
        .map(|c| {
            if c.len() == 1 {
                c[0]
            } else {
                c[rng.gen_range(0..c.len())]
            }
        })
        .collect();
    Grouping {
        components,
        representatives,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(a: u32, b: u32, y: f64) -> OverlapRecord {
        OverlapRecord {
            journal_a: a,
            journal_b: b,
            shared: 0,
            refs_a: 1,
            refs_b: 1,
            overlap: y,
        }
    }

    #[test]
    fn shared_count_takes_smaller_multiplicity() {
        // j1 cites a four times, j2 cites it twice.
        let a = ReferenceMultiset::from_cited([7, 7, 7, 7]);
        let b = ReferenceMultiset::from_cited([7, 7]);
        let r = journal_overlap(1, &a, 2, &b).unwrap();
        assert_eq!(r.shared, 2);
        assert_eq!(r.overlap, 0.5 * (2.0 / 4.0 + 2.0 / 2.0));
    }

    #[test]
    fn identical_and_disjoint() {
        let a = ReferenceMultiset::from_cited([1, 2, 2, 3]);
        assert_eq!(journal_overlap(0, &a, 1, &a.clone()).unwrap().overlap, 1.0);
        let b = ReferenceMultiset::from_cited([4, 5]);
        assert_eq!(journal_overlap(0, &a, 1, &b).unwrap().overlap, 0.0);
    }

    #[test]
    fn symmetric() {
        let a = ReferenceMultiset::from_cited([1, 2, 2, 3, 9]);
        let b = ReferenceMultiset::from_cited([2, 3, 3]);
        let ab = journal_overlap(0, &a, 1, &b).unwrap();
        let ba = journal_overlap(1, &b, 0, &a).unwrap();
        assert_eq!((ab.refs_a, ab.refs_b), (ba.refs_b, ba.refs_a));
        assert_eq!(ab.overlap, ba.overlap);
    }

    #[test]
    fn empty_reference_list_is_an_error() {
        let a = ReferenceMultiset::from_cited([1]);
        let empty = ReferenceMultiset::default();
        assert_eq!(
            journal_overlap(0, &a, 3, &empty).unwrap_err(),
            BaselineError::NoReferences(3)
        );
    }

    #[test]
    fn grouping_is_transitive() {
        let records = [record(1, 2, 0.09), record(2, 3, 0.08), record(1, 3, 0.01)];
        let g = group_overlapping(&[1, 2, 3, 4], &records, 0.08, 7);
        assert_eq!(g.components, vec![vec![1, 2, 3], vec![4]]);
        assert!([1, 2, 3].contains(&g.representatives[0]));
        assert_eq!(g.representatives[1], 4);
        assert_eq!(g, group_overlapping(&[4, 3, 2, 1], &records, 0.08, 7));
    }

    #[test]
    fn no_edges_keeps_everything() {
        let g = group_overlapping(&[5, 6], &[record(5, 6, 0.02)], 0.08, 0);
        assert_eq!(g.representatives, vec![5, 6]);
    }
}
