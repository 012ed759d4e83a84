//! Partition quality: modularity and per-community edge counts.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hierarchy::Hierarchy;
use crate::labelprop::Assignment;

/// Newman modularity of `a` on `g`, computed per community as
/// `sum_k [ e_k / m - (vol_k / 2m)^2 ]`.
pub fn modularity(g: &Graph, a: &Assignment) -> Result<f64> {
    assert_eq!(g.n(), a.len(), "assignment does not cover the graph");
    let m = g.m();
    if m == 0 {
        return Err(Error::UndefinedMetric);
    }
    let mut internal = vec![0usize; a.k()];
    let mut volume = vec![0usize; a.k()];
    for v in g.nodes() {
        let c = a.community(v);
        volume[c] += g.degree(v);
        for u in g.neighbors(v) {
            if u > v && a.community(u) == c {
                internal[c] += 1;
            }
        }
    }
    let m = m as f64;
    let two_m = 2.0 * m;
    Ok(internal
        .iter()
        .zip(&volume)
        .map(|(&e, &vol)| {
            let share = vol as f64 / two_m;
            e as f64 / m - share * share
        })
        .sum())
}

/// Level with the highest modularity against the base graph, smallest level
/// on ties.
pub fn best_level_modularity(h: &Hierarchy) -> Result<(usize, f64)> {
    if h.is_empty() {
        return Err(Error::EmptyHierarchy);
    }
    let mut best = (0, f64::NEG_INFINITY);
    for t in 1..=h.depth() {
        let q = modularity(h.base(), &h.project_to_base(t)?)?;
        if q > best.1 {
            best = (t, q);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityEdgeStats {
    /// Edges with both ends in the community.
    pub internal: Vec<usize>,
    /// Edges with exactly one end in the community.
    pub external: Vec<usize>,
    /// Cut sizes keyed by community pair `(i, j)` with `i < j`; only
    /// nonzero entries are present.
    pub pair_cuts: BTreeMap<(usize, usize), usize>,
}

impl CommunityEdgeStats {
    pub fn total_cut(&self) -> usize {
        self.pair_cuts.values().sum()
    }
}

pub fn community_edge_stats(g: &Graph, a: &Assignment) -> CommunityEdgeStats {
    assert_eq!(g.n(), a.len(), "assignment does not cover the graph");
    let mut internal = vec![0; a.k()];
    let mut external = vec![0; a.k()];
    let mut pair_cuts = BTreeMap::new();
    for (u, v) in g.edges() {
        let (cu, cv) = (a.community(u), a.community(v));
        if cu == cv {
            internal[cu] += 1;
        } else {
            external[cu] += 1;
            external[cv] += 1;
            *pair_cuts.entry((cu.min(cv), cu.max(cv))).or_insert(0) += 1;
        }
    }
    CommunityEdgeStats {
        internal,
        external,
        pair_cuts,
    }
}
