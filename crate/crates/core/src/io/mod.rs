//! Stage artifacts as headed TSV files keyed by external publication and
//! journal ids.

pub mod tsv;

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::baseline::{AuditStage, BaselineClassification};
use crate::cluster::{ClassGraph, Partition, PublicationHierarchy};
use crate::corpus::{Corpus, PubIdx};
use crate::graph::WeightedGraph;
use crate::evaluation::{Labeling, SweepResult};
use tsv::{for_each_row, TsvError};

pub const PARTITION_HEADER: [&str; 2] = ["node_id", "class_id"];
pub const HIERARCHY_HEADER: [&str; 3] = ["pub_id", "topic_id", "specialty_id"];
pub const BASELINE_HEADER: [&str; 2] = ["journal_id", "pub_id"];
pub const AUDIT_HEADER: [&str; 3] = ["stage", "journals", "articles"];
pub const CLASS_GRAPH_HEADER: [&str; 3] = ["class_a", "class_b", "relatedness"];
pub const NODE_MAP_HEADER: [&str; 2] = ["node_index", "pub_id"];
pub const SWEEP_HEADER: [&str; 9] = [
    "resolution",
    "ari",
    "n_classes",
    "n_classes_ge_500",
    "mean",
    "median",
    "p10",
    "p90",
    "selected",
];

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error(transparent)]
    Tsv(#[from] TsvError<String>),
    #[error("{}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },
}

fn lookup_pub(corpus: &Corpus, id: &str) -> Result<PubIdx, String> {
    corpus
        .pub_index(id)
        .ok_or_else(|| format!("unknown pub_id {id:?}"))
}

fn parse_u32(field: &str, what: &str) -> Result<u32, String> {
    field
        .trim()
        .parse()
        .map_err(|_| format!("invalid {what} {field:?}"))
}

/// Writes `(pub_id, class_id)` rows in item order.
pub fn write_labeling(w: &mut impl Write, corpus: &Corpus, labeling: &Labeling) -> io::Result<()> {
    writeln!(w, "{}", PARTITION_HEADER.join("\t"))?;
    for (&p, &c) in labeling.items().iter().zip(labeling.labels()) {
        writeln!(w, "{}\t{c}", corpus.pub_id(p))?;
    }
    w.flush()
}

pub fn read_labeling(path: &Path, corpus: &Corpus) -> Result<Labeling, ArtifactError> {
    let mut pairs = Vec::new();
    for_each_row(path, &PARTITION_HEADER, |_, f| {
        pairs.push((lookup_pub(corpus, f[0])?, parse_u32(f[1], "class_id")?));
        Ok(())
    })?;
    Labeling::from_pairs(pairs).map_err(|e| ArtifactError::Invalid {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn write_hierarchy(
    w: &mut impl Write,
    corpus: &Corpus,
    hier: &PublicationHierarchy,
) -> io::Result<()> {
    writeln!(w, "{}", HIERARCHY_HEADER.join("\t"))?;
    for (p, t, s) in hier.rows() {
        writeln!(w, "{}\t{t}\t{s}", corpus.pub_id(p))?;
    }
    w.flush()
}

pub fn read_hierarchy(path: &Path, corpus: &Corpus) -> Result<PublicationHierarchy, ArtifactError> {
    let mut rows = Vec::new();
    for_each_row(path, &HIERARCHY_HEADER, |_, f| {
        rows.push((
            lookup_pub(corpus, f[0])?,
            parse_u32(f[1], "topic_id")?,
            parse_u32(f[2], "specialty_id")?,
        ));
        Ok(())
    })?;
    PublicationHierarchy::from_rows(rows).map_err(|e| ArtifactError::Invalid {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn write_baseline(
    w: &mut impl Write,
    corpus: &Corpus,
    baseline: &BaselineClassification,
) -> io::Result<()> {
    writeln!(w, "{}", BASELINE_HEADER.join("\t"))?;
    for (j, arts) in &baseline.classes {
        for &a in arts {
            writeln!(w, "{}\t{}", corpus.journal_id(*j), corpus.pub_id(a))?;
        }
    }
    w.flush()
}

pub fn read_baseline(path: &Path, corpus: &Corpus) -> Result<BaselineClassification, ArtifactError> {
    let mut rows = Vec::new();
    for_each_row(path, &BASELINE_HEADER, |_, f| {
        let j = corpus
            .journal_index(f[0])
            .ok_or_else(|| format!("unknown journal_id {:?}", f[0]))?;
        rows.push((j, lookup_pub(corpus, f[1])?));
        Ok(())
    })?;
    BaselineClassification::from_rows(rows).map_err(|e| ArtifactError::Invalid {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Class graph edges; weights print in shortest round-trip form.
pub fn write_class_graph(w: &mut impl Write, class_graph: &ClassGraph) -> io::Result<()> {
    writeln!(w, "{}", CLASS_GRAPH_HEADER.join("\t"))?;
    for (a, b, r) in class_graph.graph.edges() {
        writeln!(w, "{a}\t{b}\t{r}")?;
    }
    w.flush()
}

/// Reads a class graph over the classes of `base`.
pub fn read_class_graph(path: &Path, base: &Partition) -> Result<ClassGraph, ArtifactError> {
    let mut edges = Vec::new();
    for_each_row(path, &CLASS_GRAPH_HEADER, |_, f| {
        let r: f64 = f[2]
            .trim()
            .parse()
            .map_err(|_| format!("invalid relatedness {:?}", f[2]))?;
        edges.push((parse_u32(f[0], "class_a")?, parse_u32(f[1], "class_b")?, r));
        Ok(())
    })?;
    let graph = WeightedGraph::from_edges(base.class_count(), edges).map_err(|e| {
        ArtifactError::Invalid {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    })?;
    Ok(ClassGraph {
        graph,
        class_members: base.class_sizes(),
    })
}

pub fn write_audit(w: &mut impl Write, ladder: &[AuditStage]) -> io::Result<()> {
    writeln!(w, "{}", AUDIT_HEADER.join("\t"))?;
    for s in ladder {
        writeln!(w, "{}\t{}\t{}", s.stage, s.journals, s.articles)?;
    }
    w.flush()
}

pub fn write_node_map(w: &mut impl Write, corpus: &Corpus) -> io::Result<()> {
    writeln!(w, "{}", NODE_MAP_HEADER.join("\t"))?;
    for (i, p) in corpus.publications().iter().enumerate() {
        writeln!(w, "{i}\t{}", p.id)?;
    }
    w.flush()
}

pub fn write_sweep_report(w: &mut impl Write, result: &SweepResult) -> io::Result<()> {
    writeln!(w, "{}", SWEEP_HEADER.join("\t"))?;
    for (i, r) in result.rows.iter().enumerate() {
        writeln!(
            w,
            "{}\t{:.6}\t{}\t{}\t{:.1}\t{}\t{}\t{}\t{}",
            r.resolution,
            r.ari,
            r.n_classes,
            r.n_large_classes,
            r.stats.mean,
            r.stats.median,
            r.stats.p10,
            r.stats.p90,
            u8::from(i == result.selected)
        )?;
    }
    w.flush()
}

/// Reads synthetic ground truth as `(topics, specialties)` labelings.
pub fn read_ground_truth(path: &Path, corpus: &Corpus) -> Result<(Labeling, Labeling), ArtifactError> {
    let mut topics = Vec::new();
    let mut specialties = Vec::new();
    for_each_row(path, &crate::synth::GROUND_TRUTH_HEADER, |_, f| {
        let p = lookup_pub(corpus, f[0])?;
        topics.push((p, parse_u32(f[1], "topic_id")?));
        specialties.push((p, parse_u32(f[2], "specialty_id")?));
        Ok(())
    })?;
    let invalid = |e: crate::evaluation::EvaluationError| ArtifactError::Invalid {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    Ok((
        Labeling::from_pairs(topics).map_err(invalid)?,
        Labeling::from_pairs(specialties).map_err(invalid)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CorpusBuilder, DocType};

    fn corpus() -> Corpus {
        let mut b = CorpusBuilder::default();
        for id in ["a", "b", "c"] {
            b.add_publication(id, 2010, DocType::Article, Some("J")).unwrap();
        }
        b.finish().0
    }

    #[test]
    fn class_graph_round_trip_is_exact() {
        let topics = Partition::from_labels(&[0, 0, 1, 2, 2]);
        let cg = crate::cluster::aggregate_to_class_graph(
            &WeightedGraph::from_edges(5, [(1, 2, 1.0 / 3.0), (2, 3, 0.1 + 0.2), (0, 1, 1.0)]).unwrap(),
            &topics,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cg.tsv");
        let mut buf = Vec::new();
        write_class_graph(&mut buf, &cg).unwrap();
        std::fs::write(&path, &buf).unwrap();
        assert_eq!(read_class_graph(&path, &topics).unwrap(), cg);
    }

    #[test]
    fn hierarchy_round_trip() {
        let c = corpus();
        let h = PublicationHierarchy::from_rows(vec![(0, 0, 0), (1, 1, 0), (2, 1, 0)]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.tsv");
        let mut f = std::fs::File::create(&path).unwrap();
        write_hierarchy(&mut f, &c, &h).unwrap();
        assert_eq!(read_hierarchy(&path, &c).unwrap(), h);
    }

    #[test]
    fn labeling_round_trip_and_unknown_ids() {
        let c = corpus();
        let l = Labeling::new(vec![0, 2], vec![4, 1]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.tsv");
        let mut buf = Vec::new();
        write_labeling(&mut buf, &c, &l).unwrap();
        std::fs::write(&path, &buf).unwrap();
        assert_eq!(read_labeling(&path, &c).unwrap(), l);
        std::fs::write(&path, "node_id\tclass_id\nzz\t1\n").unwrap();
        let err = read_labeling(&path, &c).unwrap_err().to_string();
        assert!(err.contains("zz"), "{err}");
    }

    #[test]
    fn baseline_round_trip() {
        let c = corpus();
        let b = BaselineClassification::from_rows(vec![(0, 0), (0, 2)]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.tsv");
        let mut buf = Vec::new();
        write_baseline(&mut buf, &c, &b).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "journal_id\tpub_id\nJ\ta\nJ\tc\n");
        std::fs::write(&path, &buf).unwrap();
        assert_eq!(read_baseline(&path, &c).unwrap(), b);
    }
}
