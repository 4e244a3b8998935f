use super::{ClusterError, Partition};
use crate::graph::WeightedGraph;

/// Constant Potts model quality of `partition`:
///
/// `Q = Σ_{i<j, same class} (a_ij − γ·s_i·s_j)`
///
/// with `a_ij` the edge weight (zero when absent) and `s_i` the node size.
pub fn cpm_quality(
    graph: &WeightedGraph,
    partition: &Partition,
    resolution: f64,
) -> Result<f64, ClusterError> {
    if partition.len() != graph.node_count() {
        return Err(ClusterError::NotTotal {
            partition: partition.len(),
            graph: graph.node_count(),
        });
    }
    let mut internal = 0.0;
    for (i, j, w) in graph.edges() {
        if partition.class_of(i as usize) == partition.class_of(j as usize) {
            internal += w;
        }
    }
    // Σ_{i<j in c} s_i s_j = (S_c² − Σ s_i²) / 2
    let mut size_sum = vec![0f64; partition.class_count()];
    let mut square_sum = vec![0f64; partition.class_count()];
    for (node, &s) in graph.node_sizes().iter().enumerate() {
        let c = partition.class_of(node) as usize;
        let s = s as f64;
        size_sum[c] += s;
        square_sum[c] += s * s;
    }
    let pairs: f64 = size_sum
        .iter()
        .zip(&square_sum)
        .map(|(&total, &sq)| 0.5 * (total * total - sq))
        .sum();
    Ok(internal - resolution * pairs)
}
