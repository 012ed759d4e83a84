//! Linear-time comparison partitions built on core peeling.

use crate::error::{Error, Result};
use crate::graph::{core_decomposition, Graph, NodeId};
use crate::labelprop::Assignment;

/// Splits nodes into the maximum k-core (community 0) and everything else
/// (community 1). Yields a single community when the max core is the whole
/// graph.
pub fn kcore_split(g: &Graph) -> Result<Assignment> {
    if g.m() == 0 {
        return Err(Error::DegenerateInput(
            "k-core split needs at least one edge",
        ));
    }
    let cd = core_decomposition(g);
    let k = cd.degeneracy();
    let labels = cd
        .core_number
        .iter()
        .map(|&c| usize::from(c != k))
        .collect();
    Assignment::from_compact(labels)
}

/// Densest suffix of a greedy min-degree peel: `(nodes, edges)` of the
/// chosen set. The earliest (largest) suffix wins ties.
pub fn densest_peel_suffix(g: &Graph) -> (Vec<NodeId>, usize) {
    let order = core_decomposition(g).peel_order;
    let mut position = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let n = order.len();
    let mut edges = g.m();
    let mut best = (0usize, edges, edges as f64 / n as f64);
    for (i, &v) in order.iter().enumerate().take(n.saturating_sub(1)) {
        edges -= g.neighbors(v).filter(|&u| position[u] > i).count();
        let density = edges as f64 / (n - i - 1) as f64;
        if density > best.2 {
            best = (i + 1, edges, density);
        }
    }
    (order[best.0..].to_vec(), best.1)
}

/// Repeatedly extracts the densest peel suffix of the residual graph as the
/// next community. Nodes left without edges form one final community.
pub fn densest_subgraph_peel(g: &Graph) -> Assignment {
    let n = g.n();
    let unassigned = usize::MAX;
    let mut labels = vec![unassigned; n];
    let mut next = 0;
    // residual node ids, mapped back to `g`
    let mut remaining: Vec<NodeId> = (0..n).collect();
    let mut local = vec![usize::MAX; n];
    loop {
        for (i, &v) in remaining.iter().enumerate() {
            local[v] = i;
        }
        let residual = Graph::from_edges(
            remaining.len(),
            remaining.iter().flat_map(|&v| {
                let local = &local;
                let labels = &labels;
                g.neighbors(v)
                    .filter(move |&u| u > v && labels[u] == unassigned)
                    .map(move |u| (local[v], local[u]))
            }),
        );
        if residual.m() == 0 {
            break;
        }
        let (suffix, _) = densest_peel_suffix(&residual);
        for &i in &suffix {
            labels[remaining[i]] = next;
        }
        next += 1;
        remaining.retain(|&v| labels[v] == unassigned);
    }
    for &v in &remaining {
        labels[v] = next;
    }
    Assignment::from_compact(labels).expect("peel labels are contiguous")
}
