//! Class-level relatedness, class graphs, and the topic → specialty
//! hierarchy built by clustering class graphs.

use super::{slm_cluster, ClusterConfig, ClusterError, Partition};
use crate::corpus::PubIdx;
use crate::evaluation::Labeling;
use crate::graph::WeightedGraph;

fn check_total(graph: &WeightedGraph, partition: &Partition) -> Result<(), ClusterError> {
    if partition.len() != graph.node_count() {
        return Err(ClusterError::NotTotal {
            partition: partition.len(),
            graph: graph.node_count(),
        });
    }
    Ok(())
}

fn class_article_counts(graph: &WeightedGraph, partition: &Partition) -> Vec<u64> {
    let mut sizes = vec![0u64; partition.class_count()];
    for (node, &s) in graph.node_sizes().iter().enumerate() {
        sizes[partition.class_of(node) as usize] += s;
    }
    sizes
}

/// Average relation weight between the members of two classes: the sum of
/// the `m × n` cross-pair weights divided by `m × n`.
pub fn class_relatedness(
    graph: &WeightedGraph,
    partition: &Partition,
    a: u32,
    b: u32,
) -> Result<f64, ClusterError> {
    check_total(graph, partition)?;
    for c in [a, b] {
        if c as usize >= partition.class_count() {
            return Err(ClusterError::UnknownClass(c));
        }
    }
    if a == b {
        return Err(ClusterError::SelfRelatedness(a));
    }
    let sizes = class_article_counts(graph, partition);
    let mut cross = 0.0;
    for (i, j, w) in graph.edges() {
        let (ci, cj) = (partition.class_of(i as usize), partition.class_of(j as usize));
        if (ci == a && cj == b) || (ci == b && cj == a) {
            cross += w;
        }
    }
    Ok(cross / (sizes[a as usize] as f64 * sizes[b as usize] as f64))
}

/// Graph over the classes of a partition, weighted by class relatedness.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassGraph {
    /// One unit-size node per class; no self-edges.
    pub graph: WeightedGraph,
    /// Number of source nodes in each class.
    pub class_members: Vec<u64>,
}

/// Aggregates `graph` over `partition`. Every class pair with at least one
/// cross edge gets an edge weighted by [`class_relatedness`].
pub fn aggregate_to_class_graph(
    graph: &WeightedGraph,
    partition: &Partition,
) -> Result<ClassGraph, ClusterError> {
    check_total(graph, partition)?;
    let sizes = class_article_counts(graph, partition);
    let mut cross: Vec<(u32, u32, f64)> = graph
        .edges()
        .filter_map(|(i, j, w)| {
            let (a, b) = (partition.class_of(i as usize), partition.class_of(j as usize));
            (a != b).then(|| if a < b { (a, b, w) } else { (b, a, w) })
        })
        .collect();
    cross.sort_by_key(|&(a, b, _)| (a, b));
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();
    for (a, b, w) in cross {
        match edges.last_mut() {
            Some(last) if last.0 == a && last.1 == b => last.2 += w,
            _ => edges.push((a, b, w)),
        }
    }
    for e in &mut edges {
        e.2 /= sizes[e.0 as usize] as f64 * sizes[e.1 as usize] as f64;
    }
    Ok(ClassGraph {
        graph: WeightedGraph::from_sorted_unique(partition.class_count(), &edges),
        class_members: partition.class_sizes(),
    })
}

/// Two linked levels: node → topic and topic → specialty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchicalClassification {
    pub topics: Partition,
    pub topic_specialties: Partition,
}

impl HierarchicalClassification {
    pub fn new(topics: Partition, topic_specialties: Partition) -> Result<Self, ClusterError> {
        if topic_specialties.len() != topics.class_count() {
            return Err(ClusterError::ClassGraphMismatch(format!(
                "{} topics but {} topic assignments",
                topics.class_count(),
                topic_specialties.len()
            )));
        }
        Ok(Self {
            topics,
            topic_specialties,
        })
    }

    /// Node → specialty, via each node's topic.
    pub fn specialties(&self) -> Partition {
        self.topics.lift(&self.topic_specialties)
    }

    pub fn specialty_count(&self) -> usize {
        self.topic_specialties.class_count()
    }
}

/// Clusters the topics of `base` into specialties using the class graph.
pub fn cluster_classes(
    class_graph: &ClassGraph,
    config: &ClusterConfig,
    base: &Partition,
) -> Result<HierarchicalClassification, ClusterError> {
    if class_graph.graph.node_count() != base.class_count() {
        return Err(ClusterError::ClassGraphMismatch(format!(
            "class graph has {} nodes, partition has {} classes",
            class_graph.graph.node_count(),
            base.class_count()
        )));
    }
    if class_graph.class_members != base.class_sizes() {
        return Err(ClusterError::ClassGraphMismatch(
            "class sizes differ from the base partition".into(),
        ));
    }
    let specialties = slm_cluster(&class_graph.graph, config)?;
    HierarchicalClassification::new(base.clone(), specialties)
}

/// Publication-level form of a hierarchy: one `(pub, topic, specialty)`
/// row per classified publication, ascending by publication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicationHierarchy {
    pubs: Vec<PubIdx>,
    topics: Vec<u32>,
    specialties: Vec<u32>,
}

impl PublicationHierarchy {
    /// `pubs[i]` is the publication of node `i`; `pubs` must be ascending.
    pub fn from_hierarchy(pubs: &[PubIdx], hier: &HierarchicalClassification) -> Self {
        assert_eq!(pubs.len(), hier.topics.len(), "one publication per node");
        assert!(pubs.windows(2).all(|w| w[0] < w[1]), "pubs must be ascending");
        let specialties = hier.specialties();
        Self {
            pubs: pubs.to_vec(),
            topics: hier.topics.labels().to_vec(),
            specialties: specialties.labels().to_vec(),
        }
    }

    /// Builds from explicit rows; fails if a topic maps to two specialties
    /// or a publication repeats.
    pub fn from_rows(mut rows: Vec<(PubIdx, u32, u32)>) -> Result<Self, ClusterError> {
        rows.sort_unstable();
        if rows.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(ClusterError::ClassGraphMismatch(
                "publication listed twice".into(),
            ));
        }
        let h = Self {
            pubs: rows.iter().map(|r| r.0).collect(),
            topics: rows.iter().map(|r| r.1).collect(),
            specialties: rows.iter().map(|r| r.2).collect(),
        };
        if !h.is_sound() {
            return Err(ClusterError::ClassGraphMismatch(
                "a topic belongs to more than one specialty".into(),
            ));
        }
        Ok(h)
    }

    pub fn len(&self) -> usize {
        self.pubs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pubs.is_empty()
    }

    pub fn pubs(&self) -> &[PubIdx] {
        &self.pubs
    }

    pub fn topics(&self) -> &[u32] {
        &self.topics
    }

    pub fn specialties(&self) -> &[u32] {
        &self.specialties
    }

    pub fn rows(&self) -> impl Iterator<Item = (PubIdx, u32, u32)> + '_ {
        (0..self.pubs.len()).map(|i| (self.pubs[i], self.topics[i], self.specialties[i]))
    }

    /// Every topic lies inside exactly one specialty.
    pub fn is_sound(&self) -> bool {
        let mut spec_of = std::collections::HashMap::new();
        self.topics
            .iter()
            .zip(&self.specialties)
            .all(|(t, s)| *spec_of.entry(*t).or_insert(*s) == *s)
    }

    pub fn topic_labeling(&self) -> Labeling {
        Labeling::new_unchecked(self.pubs.clone(), self.topics.clone())
    }

    pub fn specialty_labeling(&self) -> Labeling {
        Labeling::new_unchecked(self.pubs.clone(), self.specialties.clone())
    }

    /// Position of `pub_idx` in the row order.
    pub fn position(&self, pub_idx: PubIdx) -> Option<usize> {
        self.pubs.binary_search(&pub_idx).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bridged() -> WeightedGraph {
        WeightedGraph::from_edges(
            6,
            [
                (0, 1, 1.0),
                (1, 2, 1.0),
                (0, 2, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
                (2, 3, 0.9),
            ],
        )
        .unwrap()
    }

    #[test]
    fn relatedness_arithmetic() {
        // m = 2, n = 3, total cross weight 0.6.
        let g = WeightedGraph::from_edges(5, [(0, 2, 0.2), (0, 3, 0.1), (1, 4, 0.3)]).unwrap();
        let p = Partition::from_labels(&[0, 0, 1, 1, 1]);
        let r = class_relatedness(&g, &p, 0, 1).unwrap();
        assert!((r - 0.1).abs() < 1e-15);
    }

    #[test]
    fn relatedness_without_cross_edges_is_zero() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        let p = Partition::from_labels(&[0, 0, 1]);
        assert_eq!(class_relatedness(&g, &p, 0, 1).unwrap(), 0.0);
    }

    #[test]
    fn relatedness_of_singletons_is_edge_weight() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 0.37)]).unwrap();
        let p = Partition::singletons(2);
        assert_eq!(class_relatedness(&g, &p, 0, 1).unwrap(), 0.37);
    }

    #[test]
    fn relatedness_errors() {
        let g = bridged();
        let p = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        assert_eq!(
            class_relatedness(&g, &p, 1, 1),
            Err(ClusterError::SelfRelatedness(1))
        );
        assert_eq!(
            class_relatedness(&g, &p, 0, 5),
            Err(ClusterError::UnknownClass(5))
        );
    }

    #[test]
    fn aggregate_two_triangles() {
        let g = bridged();
        let p = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        let cg = aggregate_to_class_graph(&g, &p).unwrap();
        assert_eq!(cg.graph.node_count(), 2);
        assert_eq!(cg.graph.edge_count(), 1);
        assert_eq!(cg.graph.weight(0, 1), Some(0.9 / 9.0));
        assert_eq!(cg.graph.node_sizes(), &[1, 1]);
    }

    #[test]
    fn aggregate_singletons_is_isomorphic() {
        let g = bridged();
        let cg = aggregate_to_class_graph(&g, &Partition::singletons(6)).unwrap();
        assert_eq!(cg.graph.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn aggregate_isolated_class_has_no_edges() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        let cg = aggregate_to_class_graph(&g, &Partition::from_labels(&[0, 1, 2])).unwrap();
        assert!(cg.graph.is_isolated(2));
    }

    #[test]
    fn cluster_classes_all_separate_at_high_resolution() {
        let g = bridged();
        let topics = Partition::from_labels(&[0, 0, 1, 1, 2, 2]);
        let cg = aggregate_to_class_graph(&g, &topics).unwrap();
        let h = cluster_classes(&cg, &ClusterConfig::new(10.0), &topics).unwrap();
        assert_eq!(h.specialty_count(), 3);
        assert!(h.specialties().same_grouping(&topics));
    }

    #[test]
    fn single_topic_single_specialty() {
        let g = bridged();
        let topics = Partition::single_class(6);
        let cg = aggregate_to_class_graph(&g, &topics).unwrap();
        let h = cluster_classes(&cg, &ClusterConfig::new(1.0), &topics).unwrap();
        assert_eq!(h.specialty_count(), 1);
    }

    #[test]
    fn cluster_classes_rejects_mismatch() {
        let g = bridged();
        let topics = Partition::from_labels(&[0, 0, 1, 1, 2, 2]);
        let cg = aggregate_to_class_graph(&g, &topics).unwrap();
        let other = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        assert!(matches!(
            cluster_classes(&cg, &ClusterConfig::new(1.0), &other),
            Err(ClusterError::ClassGraphMismatch(_))
        ));
    }

    #[test]
    fn publication_hierarchy_soundness() {
        assert!(PublicationHierarchy::from_rows(vec![(0, 0, 0), (1, 0, 1)]).is_err());
        let h = PublicationHierarchy::from_rows(vec![(5, 1, 0), (2, 0, 0)]).unwrap();
        assert_eq!(h.pubs(), &[2, 5]);
        assert!(h.is_sound());
    }
}
