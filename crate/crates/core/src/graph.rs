//! Immutable undirected simple graphs in compressed sparse row form, plus
//! the core (degeneracy) decomposition used by the baselines.

use std::iter::Map;
use std::slice::Iter;

use crate::error::{Error, Result};
use crate::io::{EdgeList, IndexBase};

pub type NodeId = usize;

/// Iterator over one adjacency list.
pub type Neighbors<'a> = Map<Iter<'a, u32>, fn(&u32) -> NodeId>;

fn widen(v: &u32) -> NodeId {
    *v as NodeId
}

/// Undirected simple graph with nodes `0..n`.
///
/// Neighbor lists are sorted, free of duplicates and self-loops, and
/// symmetric: `j` is a neighbor of `i` iff `i` is a neighbor of `j`.
/// Adjacency is stored as `u32`, so `n` is limited to `u32::MAX`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    /// Builds a graph on `n` nodes from arbitrary undirected pairs.
    ///
    /// Self-loops are dropped and duplicate or reversed pairs collapse to a
    /// single edge. Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut pairs: Vec<(NodeId, NodeId)> = edges
            .into_iter()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        Self::from_sorted_unique(n, &pairs)
    }

    /// `pairs` must be sorted, deduplicated and satisfy `u < v < n`.
    pub(crate) fn from_sorted_unique(n: usize, pairs: &[(NodeId, NodeId)]) -> Self {
        assert!(
            n <= u32::MAX as usize,
            "graph too large for 32-bit node ids"
        );
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            assert!(v < n, "edge ({u}, {v}) out of range for n = {n}");
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut acc = 0;
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0; acc];
        // Pairs arrive sorted by (u, v) with u < v, so for any node x every
        // smaller neighbor (from a pair (u, x)) is written before every larger
        // one (from a pair (x, v)), and each run is itself ascending.
        for &(u, v) in pairs {
            neighbors[cursor[u]] = v as u32;
            cursor[u] += 1;
            neighbors[cursor[v]] = u as u32;
            cursor[v] += 1;
        }
        Graph { offsets, neighbors }
    }

    /// Wraps CSR arrays that already satisfy the type's invariants.
    pub(crate) fn from_csr_unchecked(offsets: Vec<usize>, neighbors: Vec<u32>) -> Self {
        debug_assert_eq!(offsets.last().copied(), Some(neighbors.len()));
        let g = Graph { offsets, neighbors };
        debug_assert!(g.check_layout().is_ok());
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> Neighbors<'_> {
        self.neighbor_slice(v)
            .iter()
            .map(widen as fn(&u32) -> NodeId)
    }

    /// Raw sorted adjacency list of `v`.
    #[inline]
    pub fn neighbor_slice(&self, v: NodeId) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u32::try_from(v).is_ok_and(|v| self.neighbor_slice(u).binary_search(&v).is_ok())
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.n()
    }

    /// Checks the structural invariants; used by tests and the CLI's
    /// self-checks.
    pub fn validate(&self) -> Result<()> {
        self.check_layout()?;
        for v in self.nodes() {
            for u in self.neighbors(v) {
                if !self.has_edge(u, v) {
                    return Err(Error::Invariant(format!("edge {v}-{u} not symmetric")));
                }
            }
        }
        Ok(())
    }

    /// Everything `validate` checks except symmetry, in one sequential pass.
    fn check_layout(&self) -> Result<()> {
        let n = self.n();
        if self.offsets[0] != 0 || *self.offsets.last().unwrap() != self.neighbors.len() {
            return Err(Error::Invariant(
                "offsets do not span neighbor array".into(),
            ));
        }
        if !self.neighbors.len().is_multiple_of(2) {
            return Err(Error::Invariant("odd neighbor array length".into()));
        }
        for v in 0..n {
            if self.offsets[v] > self.offsets[v + 1] {
                return Err(Error::Invariant(format!("offsets decrease at node {v}")));
            }
            let nbrs = self.neighbor_slice(v);
            for w in nbrs.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::Invariant(format!(
                        "neighbors of {v} not strictly increasing"
                    )));
                }
            }
            for u in nbrs.iter().map(widen) {
                if u >= n {
                    return Err(Error::Invariant(format!(
                        "neighbor {u} of {v} out of range"
                    )));
                }
                if u == v {
                    return Err(Error::Invariant(format!("self-loop at {v}")));
                }
            }
        }
        Ok(())
    }
}

/// Turns parsed pairs into a simple undirected graph.
///
/// Ids are shifted down by the list's index base. The node count is one past
/// the largest id seen, or the declared count if that is larger; ids that
/// never appear become isolated nodes.
pub fn build_graph(edges: &EdgeList) -> Graph {
    let shift = match edges.index_base() {
        IndexBase::Zero => 0,
        IndexBase::One => 1,
    };
    let max_id = edges.pairs().iter().map(|&(u, v)| u.max(v)).max();
    let from_ids = max_id.map_or(0, |id| id - shift + 1);
    let n = from_ids.max(edges.declared_nodes().unwrap_or(0));
    Graph::from_edges(
        n,
        edges.pairs().iter().map(|&(u, v)| (u - shift, v - shift)),
    )
}

/// Result of bucket peeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreDecomposition {
    /// Largest `k` such that the node belongs to the k-core.
    pub core_number: Vec<usize>,
    /// Nodes in removal order (a degeneracy ordering).
    pub peel_order: Vec<NodeId>,
}

impl CoreDecomposition {
    pub fn degeneracy(&self) -> usize {
        self.core_number.iter().copied().max().unwrap_or(0)
    }
}

/// Linear-time core decomposition by bucket peeling (Batagelj–Zaversnik).
pub fn core_decomposition(g: &Graph) -> CoreDecomposition {
    let n = g.n();
    if n == 0 {
        return CoreDecomposition {
            core_number: Vec::new(),
            peel_order: Vec::new(),
        };
    }
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);

    // bin[d] = first position in `vert` holding a node of current degree d
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut vert = vec![0usize; n];
    let mut pos = vec![0usize; n];
    for v in 0..n {
        pos[v] = bin[deg[v]];
        vert[pos[v]] = v;
        bin[deg[v]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = vert[i];
        for u in g.neighbors(v) {
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                    pos[u] = pw;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    CoreDecomposition {
        core_number: deg,
        peel_order: vert,
    }
}
