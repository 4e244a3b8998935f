//! Synthetic corpora with planted topic-within-specialty structure.
//!
//! Citation pairs are sampled independently: within a topic with
//! `p_intra_topic`, across topics of one specialty with `p_intra_specialty`,
//! and otherwise with `p_background`. Each citation gets a random direction.
//! Articles are placed in journals so that a fraction `purity` follow their
//! specialty's journals and the rest land in a uniformly chosen journal.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{
    IngestManifest, CITATIONS_HEADER, JOURNAL_CATEGORIES_HEADER, KEYWORDS_HEADER,
    PUBLICATIONS_HEADER,
};
use crate::seed;

pub const GROUND_TRUTH_HEADER: [&str; 3] = ["pub_id", "topic_id", "specialty_id"];
pub const JOURNAL_TRUTH_HEADER: [&str; 2] = ["journal_id", "dominant_specialty"];
pub const MULTIDISCIPLINARY: &str = "Multidisciplinary Sciences";

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid plant specification: {0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantSpec {
    pub n_specialties: usize,
    pub topics_per_specialty: RangeInclusive<usize>,
    pub articles_per_topic: RangeInclusive<usize>,
    pub p_intra_topic: f64,
    pub p_intra_specialty: f64,
    pub p_background: f64,
    pub journals: usize,
    /// Journals outside every specialty, placed in a multidisciplinary category.
    pub multidisciplinary_journals: usize,
    /// Chance that an article is placed in one of its specialty's journals.
    pub purity: f64,
    pub years: RangeInclusive<i32>,
    /// Distinct keywords per topic vocabulary.
    pub keywords_per_topic: usize,
    pub keywords_per_article: usize,
    pub seed: u64,
}

impl Default for PlantSpec {
    fn default() -> Self {
        Self {
            n_specialties: 4,
            topics_per_specialty: 5..=5,
            articles_per_topic: 60..=60,
            p_intra_topic: 0.15,
            p_intra_specialty: 0.02,
            p_background: 0.001,
            journals: 20,
            multidisciplinary_journals: 0,
            purity: 0.8,
            years: 2010..=2010,
            keywords_per_topic: 6,
            keywords_per_article: 3,
            seed: 1,
        }
    }
}

impl PlantSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Invalid(m));
        if self.n_specialties == 0 {
            return bad("n_specialties must be at least 1".into());
        }
        for (name, r) in [
            ("topics_per_specialty", &self.topics_per_specialty),
            ("articles_per_topic", &self.articles_per_topic),
        ] {
            if *r.start() == 0 || r.start() > r.end() {
                return bad(format!("{name} must be a non-empty range of positive counts"));
            }
        }
        let (t, s, b) = (self.p_intra_topic, self.p_intra_specialty, self.p_background);
        if !(t <= 1.0 && t > s && s > b && b >= 0.0) {
            return bad(format!(
                "probabilities must satisfy 1 >= intra-topic > intra-specialty > background >= 0, got {t}, {s}, {b}"
            ));
        }
        if !(0.0..=1.0).contains(&self.purity) {
            return bad(format!("purity must lie in [0, 1], got {}", self.purity));
        }
        if self.journals == 0 || self.multidisciplinary_journals > self.journals {
            return bad("need at least one journal and no more multidisciplinary journals than journals".into());
        }
        if self.years.start() > self.years.end() {
            return bad("empty year range".into());
        }
        if self.keywords_per_topic == 0 || self.keywords_per_article > self.keywords_per_topic {
            return bad("keywords_per_article must not exceed a non-empty keywords_per_topic".into());
        }
        let min_articles =
            self.n_specialties * self.topics_per_specialty.start() * self.articles_per_topic.start();
        if self.journals > min_articles {
            return bad(format!(
                "{} journals cannot all receive articles from as few as {min_articles} articles",
                self.journals
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthPublication {
    pub id: String,
    pub year: i32,
    pub journal: usize,
    pub topic: u32,
    pub specialty: u32,
    pub keywords: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthCorpus {
    pub publications: Vec<SynthPublication>,
    /// `(citing, cited)` positions into `publications`.
    pub citations: Vec<(u32, u32)>,
    /// Dominant specialty per journal; `None` for multidisciplinary journals.
    pub journal_specialty: Vec<Option<u32>>,
    pub topic_count: usize,
}

pub fn journal_id(j: usize) -> String {
    format!("J{j:03}")
}

fn keyword(topic: u32, k: usize) -> String {
    format!("topic {topic} term {k}")
}

fn pick_year(rng: &mut ChaCha8Rng, years: &RangeInclusive<i32>) -> i32 {
    rng.gen_range(years.clone())
}

/// Samples a corpus from `spec`; identical specs give identical corpora.
pub fn generate(spec: &PlantSpec) -> Result<SynthCorpus, SynthError> {
    spec.validate()?;
    let mut rng = seed::rng(seed::derive(spec.seed, "synth/plant"));

    // Planted hierarchy.
    let mut topic_of: Vec<u32> = Vec::new();
    let mut specialty_of: Vec<u32> = Vec::new();
    let mut topic = 0u32;
    for s in 0..spec.n_specialties as u32 {
        for _ in 0..rng.gen_range(spec.topics_per_specialty.clone()) {
            for _ in 0..rng.gen_range(spec.articles_per_topic.clone()) {
                topic_of.push(topic);
                specialty_of.push(s);
            }
            topic += 1;
        }
    }
    let n = topic_of.len();

    // Journals: the first `journals - multidisciplinary` are spread over
    // specialties round-robin.
    let focused = spec.journals - spec.multidisciplinary_journals;
    let journal_specialty: Vec<Option<u32>> = (0..spec.journals)
        .map(|j| (j < focused).then(|| (j % spec.n_specialties) as u32))
        .collect();
    let mut journals_of_specialty: Vec<Vec<usize>> = vec![Vec::new(); spec.n_specialties];
    for (j, s) in journal_specialty.iter().enumerate() {
        if let Some(s) = s {
            journals_of_specialty[*s as usize].push(j);
        }
    }

    let mut publications = Vec::with_capacity(n);
    for i in 0..n {
        let own = &journals_of_specialty[specialty_of[i] as usize];
        let journal = if !own.is_empty() && rng.gen_bool(spec.purity) {
            own[rng.gen_range(0..own.len())]
        } else {
            rng.gen_range(0..spec.journals)
        };
        let year = pick_year(&mut rng, &spec.years);
        let mut terms: Vec<usize> = (0..spec.keywords_per_topic).collect();
        for k in 0..spec.keywords_per_article {
            let pick = rng.gen_range(k..terms.len());
            terms.swap(k, pick);
        }
        let mut keywords: Vec<String> = terms[..spec.keywords_per_article]
            .iter()
            .map(|&k| keyword(topic_of[i], k))
            .collect();
        keywords.sort();
        publications.push(SynthPublication {
            id: format!("P{:06}", i + 1),
            year,
            journal,
            topic: topic_of[i],
            specialty: specialty_of[i],
            keywords,
        });
    }

    let mut citations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if topic_of[i] == topic_of[j] {
                spec.p_intra_topic
            } else if specialty_of[i] == specialty_of[j] {
                spec.p_intra_specialty
            } else {
                spec.p_background
            };
            if p > 0.0 && rng.gen_bool(p) {
                let (a, b) = (i as u32, j as u32);
                citations.push(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
            }
        }
    }

    Ok(SynthCorpus {
        publications,
        citations,
        journal_specialty,
        topic_count: topic as usize,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, SynthError> {
    File::create(path)
        .map(|f| BufWriter::with_capacity(1 << 20, f))
        .map_err(|source| SynthError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn finish(path: &Path, result: io::Result<()>) -> Result<(), SynthError> {
    result.map_err(|source| SynthError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn header(w: &mut impl Write, cols: &[&str]) -> io::Result<()> {
    writeln!(w, "{}", cols.join("\t"))
}

/// Paths written by [`write_corpus`].
#[derive(Debug, Clone)]
pub struct SynthFiles {
    pub manifest: PathBuf,
    pub ingest: IngestManifest,
    pub ground_truth: PathBuf,
    pub journal_truth: PathBuf,
}

/// Writes the corpus tables, ground truth and an ingestion manifest into `dir`.
pub fn write_corpus(corpus: &SynthCorpus, dir: &Path) -> Result<SynthFiles, SynthError> {
    std::fs::create_dir_all(dir).map_err(|source| SynthError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let ingest = IngestManifest::in_dir(dir);
    let pubs = &corpus.publications;

    let path = &ingest.publications;
    let mut w = create(path)?;
    finish(path, (|| {
        header(&mut w, &PUBLICATIONS_HEADER)?;
        for p in pubs {
            writeln!(w, "{}\t{}\tarticle\t{}", p.id, p.year, journal_id(p.journal))?;
        }
        w.flush()
    })())?;

    let path = &ingest.citations;
    let mut w = create(path)?;
    finish(path, (|| {
        header(&mut w, &CITATIONS_HEADER)?;
        for &(a, b) in &corpus.citations {
            writeln!(w, "{}\t{}", pubs[a as usize].id, pubs[b as usize].id)?;
        }
        w.flush()
    })())?;

    let path = &ingest.journal_categories;
    let mut w = create(path)?;
    finish(path, (|| {
        header(&mut w, &JOURNAL_CATEGORIES_HEADER)?;
        for (j, s) in corpus.journal_specialty.iter().enumerate() {
            match s {
                Some(s) => writeln!(w, "{}\tField {s}", journal_id(j))?,
                None => writeln!(w, "{}\t{MULTIDISCIPLINARY}", journal_id(j))?,
            }
        }
        w.flush()
    })())?;

    let path = &ingest.keywords;
    let mut w = create(path)?;
    finish(path, (|| {
        header(&mut w, &KEYWORDS_HEADER)?;
        for p in pubs {
            for k in &p.keywords {
                writeln!(w, "{}\t{k}", p.id)?;
            }
        }
        w.flush()
    })())?;

    let ground_truth = dir.join("ground_truth.tsv");
    let mut w = create(&ground_truth)?;
    finish(&ground_truth, (|| {
        header(&mut w, &GROUND_TRUTH_HEADER)?;
        for p in pubs {
            writeln!(w, "{}\t{}\t{}", p.id, p.topic, p.specialty)?;
        }
        w.flush()
    })())?;

    let journal_truth = dir.join("journal_truth.tsv");
    let mut w = create(&journal_truth)?;
    finish(&journal_truth, (|| {
        header(&mut w, &JOURNAL_TRUTH_HEADER)?;
        for (j, s) in corpus.journal_specialty.iter().enumerate() {
            let s = s.map_or_else(|| "-".to_string(), |s| s.to_string());
            writeln!(w, "{}\t{s}", journal_id(j))?;
        }
        w.flush()
    })())?;

    let manifest = dir.join("manifest.txt");
    std::fs::write(&manifest, ingest.to_text(dir)).map_err(|source| SynthError::Io {
        path: manifest.clone(),
        source,
    })?;
    Ok(SynthFiles {
        manifest,
        ingest,
        ground_truth,
        journal_truth,
    })
}

/// Large sparse corpus for throughput tests: `nodes` publications and
/// `edges` citations, 90% inside blocks of consecutive publications.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSpec {
    pub nodes: usize,
    pub edges: usize,
    pub block: usize,
    pub journals: usize,
    pub years: RangeInclusive<i32>,
    pub seed: u64,
}

impl Default for ScaleSpec {
    fn default() -> Self {
        Self {
            nodes: 1_000_000,
            edges: 10_000_000,
            block: 1_000,
            journals: 5_000,
            years: 2000..=2015,
            seed: 1,
        }
    }
}

/// Streams a [`ScaleSpec`] corpus to `dir` without holding it in memory.
pub fn write_scale_corpus(spec: &ScaleSpec, dir: &Path) -> Result<IngestManifest, SynthError> {
    if spec.nodes < 2 || spec.block < 2 || spec.journals == 0 {
        return Err(SynthError::Invalid(
            "scale corpus needs at least two nodes, blocks of two, and one journal".into(),
        ));
    }
    std::fs::create_dir_all(dir).map_err(|source| SynthError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let ingest = IngestManifest::in_dir(dir);
    let mut rng = seed::rng(seed::derive(spec.seed, "synth/scale"));
    let id = |i: usize| format!("S{i:08}");

    let path = &ingest.publications;
    let mut w = create(path)?;
    finish(path, (|| {
        header(&mut w, &PUBLICATIONS_HEADER)?;
        for i in 0..spec.nodes {
            let year = pick_year(&mut rng, &spec.years);
            let journal = (i / spec.block) % spec.journals;
            writeln!(w, "{}\t{year}\tarticle\t{}", id(i), journal_id(journal))?;
        }
        w.flush()
    })())?;

    let path = &ingest.citations;
    let mut w = create(path)?;
    finish(path, (|| {
        header(&mut w, &CITATIONS_HEADER)?;
        let mut written = 0;
        while written < spec.edges {
            let a = rng.gen_range(0..spec.nodes);
            let b = if rng.gen_bool(0.9) {
                let start = a / spec.block * spec.block;
                let end = (start + spec.block).min(spec.nodes);
                rng.gen_range(start..end)
            } else {
                rng.gen_range(0..spec.nodes)
            };
            if a != b {
                writeln!(w, "{}\t{}", id(a), id(b))?;
                written += 1;
            }
        }
        w.flush()
    })())?;

    for (path, cols) in [
        (&ingest.journal_categories, &JOURNAL_CATEGORIES_HEADER),
        (&ingest.keywords, &KEYWORDS_HEADER),
    ] {
        let mut w = create(path)?;
        finish(path, header(&mut w, cols).and_then(|_| w.flush()))?;
    }
    std::fs::write(dir.join("manifest.txt"), ingest.to_text(dir)).map_err(|source| {
        SynthError::Io {
            path: dir.join("manifest.txt"),
            source,
        }
    })?;
    Ok(ingest)
}
