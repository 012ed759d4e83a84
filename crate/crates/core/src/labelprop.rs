//! Flat label propagation.
//!
//! Every node starts in its own community. Each iteration visits the still
//! active nodes in a fresh random order and moves each one to the label
//! held by most of its neighbors; updates are visible immediately to nodes
//! later in the same pass. A node whose label survives `delta` consecutive
//! visits is frozen: it leaves the visiting order but keeps voting for its
//! neighbors. A frozen node is woken again as soon as one of its neighbors
//! changes label, so a pass that changes nothing leaves every node holding
//! a most frequent neighbor label.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

pub const DEFAULT_MAX_ITERS: usize = 100;
pub const DEFAULT_DELTA: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpParams {
    /// Upper bound on passes over the active nodes.
    pub max_iters: usize,
    /// Consecutive unchanged visits after which a node is frozen.
    pub delta: usize,
    pub seed: u64,
}

impl LpParams {
    pub fn new(max_iters: usize, delta: usize, seed: u64) -> Result<Self> {
        let p = LpParams {
            max_iters,
            delta,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        LpParams { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParams("max_iters must be at least 1".into()));
        }
        if self.delta == 0 {
            return Err(Error::InvalidParams("delta must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for LpParams {
    fn default() -> Self {
        LpParams {
            max_iters: DEFAULT_MAX_ITERS,
            delta: DEFAULT_DELTA,
            seed: 0,
        }
    }
}

/// Generator for one independent random stream derived from `seed`.
///
/// Flat propagation uses stream 0; hierarchy level `t` uses stream `t - 1`,
/// so the first level of a hierarchy reproduces a flat run with the same seed.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Community labels compacted to `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<usize>,
    k: usize,
}

impl Assignment {
    /// Accepts labels that already use every value in `0..k` for some `k`.
    pub fn from_compact(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut seen = vec![false; k];
        for &l in &labels {
            seen[l] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParams("labels are not compact".into()));
        }
        Ok(Assignment { labels, k })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }

    /// Number of communities.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of labelled nodes.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn community(&self, v: NodeId) -> usize {
        self.labels[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Node sets, each in increasing id order.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &l) in self.labels.iter().enumerate() {
            out[l].push(v);
        }
        out
    }
}

/// Relabels to `0..k` in order of first appearance, scanning by node id.
pub fn compact_labels(raw: &[usize]) -> Assignment {
    let max = raw.iter().copied().max().unwrap_or(0);
    if max < raw.len().saturating_mul(2).max(1024) {
        let unseen = usize::MAX;
        let mut map = vec![unseen; max + 1];
        let mut k = 0;
        let labels = raw
            .iter()
            .map(|&r| {
                if map[r] == unseen {
                    map[r] = k;
                    k += 1;
                }
                map[r]
            })
            .collect();
        return Assignment { labels, k };
    }
    let mut map: HashMap<usize, usize> = HashMap::new();
    let labels = raw
        .iter()
        .map(|&r| {
            let next = map.len();
            *map.entry(r).or_insert(next)
        })
        .collect();
    Assignment {
        labels,
        k: map.len(),
    }
}

// Degree up to which neighbor labels are tallied in a stack buffer.
const SMALL_DEGREE: usize = 16;

/// Mutable propagation state.
#[derive(Debug, Clone)]
pub struct LpState {
    labels: Vec<u32>,
    stable_iters: Vec<u32>,
    active: Vec<bool>,
    delta: usize,
    // per-label tally reused across updates; only `touched` entries are nonzero
    counts: Vec<u32>,
    touched: Vec<usize>,
    ties: Vec<usize>,
}

impl LpState {
    /// Every node in its own community, all active.
    pub fn new(n: usize, delta: usize) -> Self {
        LpState {
            labels: (0..n as u32).collect(),
            stable_iters: vec![0; n],
            active: vec![true; n],
            delta,
            counts: vec![0; n],
            touched: Vec::new(),
            ties: Vec::new(),
        }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn stable_iters(&self) -> &[u32] {
        &self.stable_iters
    }

    pub fn is_active(&self, v: NodeId) -> bool {
        self.active[v]
    }

    /// Best label for `v` given its neighbors' current labels.
    ///
    /// `v`'s own label does not vote. If it is among the most frequent
    /// neighbor labels it is kept; otherwise one of the most frequent is
    /// drawn uniformly. A node without neighbors keeps its label.
    pub fn update_node<R: Rng + ?Sized>(&mut self, g: &Graph, v: NodeId, rng: &mut R) -> usize {
        let current = self.labels[v] as usize;
        let nbrs = g.neighbor_slice(v);
        if nbrs.is_empty() {
            return current;
        }
        if nbrs.len() <= SMALL_DEGREE {
            return self.update_small(nbrs, current, rng);
        }
        let mut best = 0u32;
        for &u in nbrs {
            let l = self.labels[u as usize] as usize;
            if self.counts[l] == 0 {
                self.touched.push(l);
            }
            self.counts[l] += 1;
            best = best.max(self.counts[l]);
        }
        let chosen = if self.counts[current] == best {
            current
        } else {
            self.ties.clear();
            self.ties.extend(
                self.touched
                    .iter()
                    .copied()
                    .filter(|&l| self.counts[l] == best),
            );
            if self.ties.len() == 1 {
                self.ties[0]
            } else {
                self.ties[rng.gen_range(0..self.ties.len())]
            }
        };
        for &l in &self.touched {
            self.counts[l] = 0;
        }
        self.touched.clear();
        chosen
    }

    /// Same rule as `update_node`, tallied on the stack so low-degree nodes
    /// skip the label-indexed counter array.
    fn update_small<R: Rng + ?Sized>(&self, nbrs: &[u32], current: usize, rng: &mut R) -> usize {
        let mut seen = [0u32; SMALL_DEGREE];
        let mut count = [0u32; SMALL_DEGREE];
        let mut k = 0;
        for &u in nbrs {
            let l = self.labels[u as usize];
            match seen[..k].iter().position(|&s| s == l) {
                Some(i) => count[i] += 1,
                None => {
                    seen[k] = l;
                    count[k] = 1;
                    k += 1;
                }
            }
        }
        let best = count[..k].iter().copied().max().unwrap_or(0);
        let mut ties = [0u32; SMALL_DEGREE];
        let mut t = 0;
        for i in 0..k {
            if count[i] == best {
                if seen[i] as usize == current {
                    return current;
                }
                ties[t] = seen[i];
                t += 1;
            }
        }
        if t == 1 {
            ties[0] as usize
        } else {
            ties[rng.gen_range(0..t)] as usize
        }
    }

    /// Stores `label` for `v` and updates its stability counter. On a
    /// change, frozen neighbors of `v` are woken. Returns whether the label
    /// changed.
    pub fn apply(&mut self, g: &Graph, v: NodeId, label: usize) -> bool {
        if label == self.labels[v] as usize {
            self.stable_iters[v] = self.stable_iters[v].saturating_add(1);
            if self.stable_iters[v] as usize >= self.delta {
                self.active[v] = false;
            }
            false
        } else {
            self.labels[v] = label as u32;
            self.stable_iters[v] = 0;
            for u in g.neighbors(v) {
                if !self.active[u] {
                    self.active[u] = true;
                    self.stable_iters[u] = 0;
                }
            }
            true
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// A full pass changed no label.
    Converged,
    /// Every node reached the stability threshold.
    AllFrozen,
    /// Hit `max_iters`.
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpRun {
    pub assignment: Assignment,
    pub iterations: usize,
    pub stop: StopReason,
    /// Label-tally operations: one per visited node plus one per neighbor
    /// read. Bounded by `iterations * (n + 2m)`.
    pub counter_ops: u64,
    /// Largest per-iteration value of `counter_ops`.
    pub max_iteration_ops: u64,
}

/// Runs label propagation with `params.seed` on random stream 0.
pub fn propagate(g: &Graph, params: &LpParams) -> LpRun {
    let mut rng = seeded_rng(params.seed, 0);
    propagate_with_rng(g, params, &mut rng)
}

pub fn propagate_with_rng<R: Rng + ?Sized>(g: &Graph, params: &LpParams, rng: &mut R) -> LpRun {
    let n = g.n();
    let mut state = LpState::new(n, params.delta.max(1));
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut iterations = 0;
    let mut counter_ops = 0u64;
    let mut max_iteration_ops = 0u64;
    let stop = loop {
        if order.is_empty() {
            break StopReason::AllFrozen;
        }
        if iterations == params.max_iters {
            break StopReason::IterationLimit;
        }
        iterations += 1;
        order.shuffle(rng);
        let mut changed = 0usize;
        let mut ops = 0u64;
        for &v in &order {
            let v = v as NodeId;
            ops += 1 + g.degree(v) as u64;
            let label = state.update_node(g, v, rng);
            if state.apply(g, v, label) {
                changed += 1;
            }
        }
        counter_ops += ops;
        max_iteration_ops = max_iteration_ops.max(ops);
        if changed == 0 {
            break StopReason::Converged;
        }
        order.clear();
        order.extend((0..n as u32).filter(|&v| state.active[v as usize]));
    };
    let raw: Vec<usize> = state.labels.iter().map(|&l| l as usize).collect();
    LpRun {
        assignment: compact_labels(&raw),
        iterations,
        stop,
        counter_ops,
        max_iteration_ops,
    }
}
