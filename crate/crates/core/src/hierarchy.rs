//! Hierarchical label propagation: alternate flat propagation with
//! supergraph coarsening until nothing is left to merge.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::labelprop::{compact_labels, propagate_with_rng, seeded_rng, Assignment, LpParams};

/// Per-level counters. `nodes`/`edges` describe the graph the level was
/// computed on; `communities` is the node count of the resulting supergraph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub nodes: usize,
    pub edges: usize,
    pub communities: usize,
    pub superedges: usize,
    pub iterations: usize,
    pub elapsed: f64,
}

#[derive(Debug, Clone)]
pub struct Level {
    /// Communities over the previous level's nodes.
    pub assignment: Assignment,
    /// One node per community, one edge per adjacent community pair.
    pub supergraph: Graph,
    pub stats: LevelStats,
}

#[derive(Debug, Clone)]
pub struct Hierarchy {
    base: Graph,
    levels: Vec<Level>,
}

/// Quotient graph of `g` under `a`: communities `p != q` are joined iff some
/// edge of `g` crosses between them.
///
/// Runs in `O(n + m)`: members are bucketed by community, each community's
/// distinct neighbor communities are collected with a marker array, and a
/// transpose pass emits every adjacency list already sorted.
pub fn create_super_graph(g: &Graph, a: &Assignment) -> Graph {
    assert_eq!(g.n(), a.len(), "assignment does not cover the graph");
    let k = a.k();
    let (start, members) = bucket_by_community(a);

    let none = usize::MAX;
    let mut mark = vec![none; k];
    let mut first_offsets = Vec::with_capacity(k + 1);
    let mut first_lists: Vec<u32> = Vec::new();
    first_offsets.push(0);
    for p in 0..k {
        for &u in &members[start[p]..start[p + 1]] {
            for v in g.neighbors(u) {
                let q = a.community(v);
                if q != p && mark[q] != p {
                    mark[q] = p;
                    first_lists.push(q as u32);
                }
            }
        }
        first_offsets.push(first_lists.len());
    }

    // symmetric, so the transpose has the same lists, now in ascending order
    let mut cursor = first_offsets[..k].to_vec();
    let mut neighbors = vec![0; first_lists.len()];
    for p in 0..k {
        for &q in &first_lists[first_offsets[p]..first_offsets[p + 1]] {
            let q = q as usize;
            neighbors[cursor[q]] = p as u32;
            cursor[q] += 1;
        }
    }
    Graph::from_csr_unchecked(first_offsets, neighbors)
}

/// Counting sort of nodes by community: members of `c` are
/// `order[start[c]..start[c + 1]]`.
fn bucket_by_community(a: &Assignment) -> (Vec<usize>, Vec<NodeId>) {
    let k = a.k();
    let mut start = vec![0usize; k + 1];
    for &c in a.labels() {
        start[c + 1] += 1;
    }
    for c in 0..k {
        start[c + 1] += start[c];
    }
    let mut cursor = start[..k].to_vec();
    let mut order = vec![0; a.len()];
    for (v, &c) in a.labels().iter().enumerate() {
        order[cursor[c]] = v;
        cursor[c] += 1;
    }
    (start, order)
}

/// Same result as [`create_super_graph`], with source nodes split across
/// the rayon pool. Each worker dedups its own crossing pairs before the
/// merge.
pub fn create_super_graph_par(g: &Graph, a: &Assignment) -> Graph {
    assert_eq!(g.n(), a.len(), "assignment does not cover the graph");
    const CHUNK: usize = 4096;
    let mut pairs: Vec<(NodeId, NodeId)> = (0..g.n())
        .into_par_iter()
        .chunks(CHUNK)
        .map(|nodes| {
            let mut local: Vec<(NodeId, NodeId)> = nodes
                .into_iter()
                .flat_map(|u| {
                    g.neighbors(u)
                        .filter(move |&v| u < v)
                        .filter_map(move |v| crossing(a, u, v))
                })
                .collect();
            local.sort_unstable();
            local.dedup();
            local
        })
        .flatten()
        .collect();
    pairs.par_sort_unstable();
    pairs.dedup();
    Graph::from_sorted_unique(a.k(), &pairs)
}

#[inline]
fn crossing(a: &Assignment, u: NodeId, v: NodeId) -> Option<(NodeId, NodeId)> {
    let (cu, cv) = (a.community(u), a.community(v));
    match cu.cmp(&cv) {
        std::cmp::Ordering::Less => Some((cu, cv)),
        std::cmp::Ordering::Greater => Some((cv, cu)),
        std::cmp::Ordering::Equal => None,
    }
}

/// Builds the community hierarchy of `g`.
///
/// Stops once a supergraph has fewer than two nodes, or when a level fails
/// to merge anything (which only happens on an edgeless graph). The level
/// that triggers the stop is kept.
pub fn build_hierarchy(g: &Graph, params: &LpParams) -> Hierarchy {
    let mut levels: Vec<Level> = Vec::new();
    if g.n() == 0 {
        return Hierarchy {
            base: g.clone(),
            levels,
        };
    }
    loop {
        let current = levels.last().map_or(g, |l| &l.supergraph);
        let t = levels.len() as u64 + 1;
        let started = Instant::now();
        let mut rng = seeded_rng(params.seed, t - 1);
        let run = propagate_with_rng(current, params, &mut rng);
        let supergraph = create_super_graph(current, &run.assignment);
        let stats = LevelStats {
            nodes: current.n(),
            edges: current.m(),
            communities: supergraph.n(),
            superedges: supergraph.m(),
            iterations: run.iterations,
            elapsed: started.elapsed().as_secs_f64(),
        };
        let stalled = supergraph.n() == current.n();
        let done = supergraph.n() < 2 || stalled;
        levels.push(Level {
            assignment: run.assignment,
            supergraph,
            stats,
        });
        if done {
            break;
        }
    }
    Hierarchy {
        base: g.clone(),
        levels,
    }
}

impl Hierarchy {
    /// Assembles a hierarchy from precomputed levels, checking that each
    /// assignment covers the graph below it.
    pub fn from_levels(base: Graph, levels: Vec<Level>) -> Result<Self> {
        let mut below = base.n();
        for (i, level) in levels.iter().enumerate() {
            if level.assignment.len() != below {
                return Err(Error::Invariant(format!(
                    "level {} assignment covers {} nodes, expected {below}",
                    i + 1,
                    level.assignment.len()
                )));
            }
            if level.supergraph.n() != level.assignment.k() {
                return Err(Error::Invariant(format!(
                    "level {} supergraph size differs from community count",
                    i + 1
                )));
            }
            below = level.supergraph.n();
        }
        Ok(Hierarchy { base, levels })
    }

    /// Wraps one flat partition of `base` as a single-level hierarchy.
    pub fn single_level(
        base: Graph,
        assignment: Assignment,
        iterations: usize,
        elapsed: f64,
    ) -> Self {
        let supergraph = create_super_graph(&base, &assignment);
        let stats = LevelStats {
            nodes: base.n(),
            edges: base.m(),
            communities: supergraph.n(),
            superedges: supergraph.m(),
            iterations,
            elapsed,
        };
        Hierarchy {
            base,
            levels: vec![Level {
                assignment,
                supergraph,
                stats,
            }],
        }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Level `t`, counting from 1.
    pub fn level(&self, t: usize) -> Result<&Level> {
        self.check_level(t)?;
        Ok(&self.levels[t - 1])
    }

    /// Number of levels L.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    fn check_level(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.levels.len() {
            return Err(Error::LevelOutOfRange {
                level: t,
                levels: self.levels.len(),
            });
        }
        Ok(())
    }

    /// Structural checks: every supergraph is simple with one node per
    /// community, and node and edge counts never grow from one level to the
    /// next.
    pub fn check_invariants(&self) -> Result<()> {
        let mut prev = &self.base;
        for (i, level) in self.levels.iter().enumerate() {
            let t = i + 1;
            let sg = &level.supergraph;
            sg.validate()?;
            if level.assignment.len() != prev.n() || sg.n() != level.assignment.k() {
                return Err(Error::Invariant(format!("level {t} sizes inconsistent")));
            }
            if sg.n() > prev.n() || sg.m() > prev.m() {
                return Err(Error::Invariant(format!("level {t} supergraph grew")));
            }
            prev = sg;
        }
        Ok(())
    }

    /// Level-`t` communities expressed over the base graph's nodes.
    pub fn project_to_base(&self, t: usize) -> Result<Assignment> {
        self.check_level(t)?;
        let mut labels = self.levels[0].assignment.labels().to_vec();
        for level in &self.levels[1..t] {
            for l in labels.iter_mut() {
                *l = level.assignment.community(*l);
            }
        }
        Ok(compact_labels(&labels))
    }

    /// Level-1 labels plus one merge map per later level.
    pub fn compress(&self) -> CompressedHierarchy {
        let mut levels = self.levels.iter();
        let base_labels = levels
            .next()
            .map(|l| l.assignment.labels().to_vec())
            .unwrap_or_default();
        let merges = levels.map(|l| l.assignment.labels().to_vec()).collect();
        CompressedHierarchy {
            base_labels,
            merges,
        }
    }
}

/// Community assignments stored as the finest partition plus how its
/// communities merge at each subsequent level. Takes `N + sum |C^t|` words
/// instead of `N * L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressedHierarchy {
    pub base_labels: Vec<usize>,
    /// `merges[i][c]` is the level `i + 2` community of level `i + 1`
    /// community `c`.
    pub merges: Vec<Vec<usize>>,
}

impl CompressedHierarchy {
    pub fn depth(&self) -> usize {
        if self.base_labels.is_empty() && self.merges.is_empty() {
            0
        } else {
            1 + self.merges.len()
        }
    }

    /// Base-node assignments for every level, outermost last. Fails if a
    /// merge map does not cover the level below it.
    pub fn expand(&self) -> Result<Vec<Assignment>> {
        if self.depth() == 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::with_capacity(self.depth());
        let mut labels = self.base_labels.clone();
        let mut width = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        out.push(compact_labels(&labels));
        for (i, merge) in self.merges.iter().enumerate() {
            if merge.len() != width {
                return Err(Error::Invariant(format!(
                    "merge map {} has length {}, expected {width}",
                    i + 1,
                    merge.len()
                )));
            }
            for l in labels.iter_mut() {
                *l = merge[*l];
            }
            width = merge.iter().map(|&l| l + 1).max().unwrap_or(0);
            out.push(compact_labels(&labels));
        }
        Ok(out)
    }
}
