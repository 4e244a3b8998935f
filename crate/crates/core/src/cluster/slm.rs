//! Smart local moving.
//!
//! One SLM pass runs local moving on the network, then refines every class
//! by local moving inside its induced subnetwork (starting from
//! singletons), aggregates the refined classes into a reduced network whose
//! initial clustering is the unrefined one, and recurses on it. The outer
//! loop repeats passes from the current clustering until the quality gain of
//! a whole pass falls to the tolerance.
//!
//! Everything here is sequential: one seeded RNG stream drives all node
//! visiting orders, so the result depends only on the graph and the config.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{cpm_quality, ClusterConfig, ClusterError, Partition};
use crate::graph::WeightedGraph;

/// Upper bound on local-moving sweeps over the node order. Reaching it only
/// happens with a zero tolerance and round-off cycling.
const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone)]
struct Network {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    node_weight: Vec<f64>,
}

impl Network {
    fn from_graph(g: &WeightedGraph) -> Self {
        let (offsets, targets, weights) = g.raw_parts();
        Self {
            offsets: offsets.to_vec(),
            targets: targets.to_vec(),
            weights: weights.to_vec(),
            node_weight: g.node_sizes().iter().map(|&s| s as f64).collect(),
        }
    }

    fn len(&self) -> usize {
        self.node_weight.len()
    }

    fn adjacency(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.targets[range.clone()]
            .iter()
            .map(|&t| t as usize)
            .zip(self.weights[range].iter().copied())
    }

    /// Network induced by `nodes` (ascending). `local` is scratch of length
    /// `self.len()` filled with `u32::MAX`, and is restored on return.
    fn subnetwork(&self, nodes: &[u32], local: &mut [u32]) -> Network {
        for (k, &v) in nodes.iter().enumerate() {
            local[v as usize] = k as u32;
        }
        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut node_weight = Vec::with_capacity(nodes.len());
        for &v in nodes {
            for (t, w) in self.adjacency(v as usize) {
                let lt = local[t];
                if lt != u32::MAX {
                    targets.push(lt);
                    weights.push(w);
                }
            }
            offsets.push(targets.len());
            node_weight.push(self.node_weight[v as usize]);
        }
        for &v in nodes {
            local[v as usize] = u32::MAX;
        }
        Network {
            offsets,
            targets,
            weights,
            node_weight,
        }
    }

    /// Collapses each of the `k` clusters into one node. Intra-cluster
    /// weight is dropped: it is constant under moves of whole clusters.
    fn reduce(&self, clustering: &[u32], k: usize) -> Network {
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); k];
        let mut node_weight = vec![0f64; k];
        for (i, &c) in clustering.iter().enumerate() {
            members[c as usize].push(i as u32);
            node_weight[c as usize] += self.node_weight[i];
        }
        let mut offsets = Vec::with_capacity(k + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut acc = vec![0f64; k];
        let mut seen = vec![false; k];
        let mut touched: Vec<u32> = Vec::new();
        for (c, nodes) in members.iter().enumerate() {
            for &i in nodes {
                for (t, w) in self.adjacency(i as usize) {
                    let d = clustering[t];
                    if d as usize == c {
                        continue;
                    }
                    if !seen[d as usize] {
                        seen[d as usize] = true;
                        touched.push(d);
                    }
                    acc[d as usize] += w;
                }
            }
            touched.sort_unstable();
            for &d in &touched {
                targets.push(d);
                weights.push(acc[d as usize]);
                acc[d as usize] = 0.0;
                seen[d as usize] = false;
            }
            touched.clear();
            offsets.push(targets.len());
        }
        Network {
            offsets,
            targets,
            weights,
            node_weight,
        }
    }
}

/// Renumbers `clustering` densely by first appearance; returns the count.
fn renumber(clustering: &mut [u32]) -> usize {
    let mut map = vec![u32::MAX; clustering.len()];
    let mut next = 0u32;
    for c in clustering.iter_mut() {
        let slot = &mut map[*c as usize];
        if *slot == u32::MAX {
            *slot = next;
            next += 1;
        }
        *c = *slot;
    }
    next as usize
}

struct Mover {
    resolution: f64,
    tolerance: f64,
}

impl Mover {
    /// Moves single nodes to the best neighboring (or an empty) cluster
    /// until a full sweep over the visiting order changes nothing.
    ///
    /// A move is accepted only if it beats staying by more than the
    /// tolerance; among equally good targets the smallest cluster id wins.
    /// `clustering` must hold ids below `net.len()` and is left renumbered.
    fn local_moving(&self, net: &Network, clustering: &mut [u32], rng: &mut ChaCha8Rng) -> bool {
        let n = net.len();
        if n <= 1 {
            renumber(clustering);
            return false;
        }
        let mut cluster_weight = vec![0f64; n];
        let mut cluster_nodes = vec![0usize; n];
        for (i, &c) in clustering.iter().enumerate() {
            cluster_weight[c as usize] += net.node_weight[i];
            cluster_nodes[c as usize] += 1;
        }
        let mut unused: Vec<u32> = (0..n as u32)
            .rev()
            .filter(|&c| cluster_nodes[c as usize] == 0)
            .collect();

        let mut order: Vec<u32> = (0..n as u32).collect();
        order.shuffle(rng);

        let mut edge_weight = vec![0f64; n];
        let mut seen = vec![false; n];
        let mut neighbor_clusters: Vec<u32> = Vec::new();
        let mut changed = false;
        let mut stable = 0usize;
        let mut pos = 0usize;
        let mut visits = 0usize;
        let max_visits = n.saturating_mul(MAX_SWEEPS);

        while stable < n && visits < max_visits {
            visits += 1;
            let j = order[pos] as usize;
            pos = (pos + 1) % n;
            let w_j = net.node_weight[j];
            let old = clustering[j];

            cluster_weight[old as usize] -= w_j;
            cluster_nodes[old as usize] -= 1;

            for (t, w) in net.adjacency(j) {
                let c = clustering[t];
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    neighbor_clusters.push(c);
                }
                edge_weight[c as usize] += w;
            }

            let gain =
                |c: u32, ew: f64| ew - w_j * cluster_weight[c as usize] * self.resolution;
            let stay = gain(old, edge_weight[old as usize]);

            let mut best = old;
            let mut best_gain = f64::NEG_INFINITY;
            for &c in &neighbor_clusters {
                if c == old {
                    continue;
                }
                let g = gain(c, edge_weight[c as usize]);
                if g > best_gain || (g == best_gain && c < best) {
                    best = c;
                    best_gain = g;
                }
            }
            // Moving to an empty cluster is only distinct from staying when
            // the node's old cluster still has other members.
            if cluster_nodes[old as usize] > 0 {
                if let Some(&empty) = unused.last() {
                    if 0.0 > best_gain || (best_gain == 0.0 && empty < best) {
                        best = empty;
                        best_gain = 0.0;
                    }
                }
            }

            let target = if best != old && best_gain > stay + self.tolerance {
                best
            } else {
                old
            };

            if target != old && cluster_nodes[target as usize] == 0 {
                let popped = unused.pop();
                debug_assert_eq!(popped, Some(target));
            }
            cluster_weight[target as usize] += w_j;
            cluster_nodes[target as usize] += 1;
            if target != old && cluster_nodes[old as usize] == 0 {
                unused.push(old);
            }

            for &c in &neighbor_clusters {
                edge_weight[c as usize] = 0.0;
                seen[c as usize] = false;
            }
            neighbor_clusters.clear();

            if target != old {
                clustering[j] = target;
                changed = true;
                stable = 1;
            } else {
                stable += 1;
            }
        }
        renumber(clustering);
        changed
    }

    /// One smart-local-moving pass starting from `clustering`.
    fn smart_local_moving(
        &self,
        net: &Network,
        clustering: &mut Vec<u32>,
        rng: &mut ChaCha8Rng,
    ) -> bool {
        let n = net.len();
        if n <= 1 {
            return false;
        }
        let mut changed = self.local_moving(net, clustering, rng);
        let k = clustering.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        if k == n {
            return changed;
        }

        let mut members: Vec<Vec<u32>> = vec![Vec::new(); k];
        for (i, &c) in clustering.iter().enumerate() {
            members[c as usize].push(i as u32);
        }
        let mut refined = vec![0u32; n];
        let mut parent_of_refined: Vec<u32> = Vec::new();
        let mut local = vec![u32::MAX; n];
        for (c, nodes) in members.iter().enumerate() {
            let sub = net.subnetwork(nodes, &mut local);
            let mut sub_clustering: Vec<u32> = (0..nodes.len() as u32).collect();
            self.local_moving(&sub, &mut sub_clustering, rng);
            let base = parent_of_refined.len() as u32;
            let sub_k = sub_clustering.iter().map(|&s| s + 1).max().unwrap_or(0);
            for (idx, &v) in nodes.iter().enumerate() {
                refined[v as usize] = base + sub_clustering[idx];
            }
            parent_of_refined.extend(std::iter::repeat(c as u32).take(sub_k as usize));
        }

        // When refinement splits every class back into singletons the
        // reduced network would equal this one; aggregate the unrefined
        // classes instead so the recursion always shrinks.
        let (reduced, mut reduced_clustering, assignment) = if parent_of_refined.len() < n {
            let reduced = net.reduce(&refined, parent_of_refined.len());
            (reduced, parent_of_refined, refined)
        } else {
            let reduced = net.reduce(clustering, k);
            (reduced, (0..k as u32).collect(), clustering.clone())
        };
        changed |= self.smart_local_moving(&reduced, &mut reduced_clustering, rng);
        for (i, c) in clustering.iter_mut().enumerate() {
            *c = reduced_clustering[assignment[i] as usize];
        }
        renumber(clustering);
        changed
    }
}

/// Clusters `graph` by maximizing the CPM quality at `config.resolution`.
pub fn slm_cluster(graph: &WeightedGraph, config: &ClusterConfig) -> Result<Partition, ClusterError> {
    slm_cluster_traced(graph, config).map(|(p, _)| p)
}

/// Like [`slm_cluster`], also returning the quality after each outer
/// iteration of the winning start (starting with the singleton quality).
pub fn slm_cluster_traced(
    graph: &WeightedGraph,
    config: &ClusterConfig,
) -> Result<(Partition, Vec<f64>), ClusterError> {
    config.validate()?;
    let n = graph.node_count();
    if n == 0 {
        return Ok((Partition::singletons(0), vec![0.0]));
    }
    let net = Network::from_graph(graph);
    let mover = Mover {
        resolution: config.resolution,
        tolerance: config.quality_tolerance,
    };

    let mut best: Option<(f64, Vec<u32>, Vec<f64>)> = None;
    for start in 0..config.random_starts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(start as u64);
        let mut clustering: Vec<u32> = (0..n as u32).collect();
        let mut quality = 0.0;
        let mut trace = vec![quality];
        for _ in 0..config.max_outer_iterations {
            let changed = mover.smart_local_moving(&net, &mut clustering, &mut rng);
            let k = clustering.iter().map(|&c| c + 1).max().unwrap_or(0);
            let next = cpm_quality(
                graph,
                &Partition::from_dense(clustering.clone(), k),
                config.resolution,
            )?;
            trace.push(next);
            let gain = next - quality;
            quality = next;
            if !changed || gain <= config.quality_tolerance {
                break;
            }
        }
        if best.as_ref().map_or(true, |(q, _, _)| quality > *q) {
            best = Some((quality, clustering, trace));
        }
    }
    let (_, clustering, trace) = best.expect("at least one start");
    Ok((Partition::from_labels(&clustering).sorted_by_size(), trace))
}
