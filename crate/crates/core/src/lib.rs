//! Two-level publication classification from citation networks.
//!
//! The crate covers the full calibration loop: ingesting id-level corpus
//! tables, building the normalized direct-citation network, clustering it
//! with smart local moving under the constant Potts model, constructing a
//! journal-based baseline classification, scoring candidate granularities
//! with the adjusted Rand index, and emitting descriptive reports.

pub mod analytics;
pub mod baseline;
pub mod cluster;
pub mod corpus;
pub mod evaluation;
pub mod graph;
pub mod io;
pub mod percentile;
pub mod seed;
pub mod synth;

pub use cluster::{ClusterConfig, HierarchicalClassification, Partition, PublicationHierarchy};
pub use corpus::{Corpus, CorpusView, DocType, Publication};
pub use evaluation::Labeling;
pub use graph::WeightedGraph;
