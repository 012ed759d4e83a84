//! Shared fixtures, generators and independent oracles for the
//! integration suites.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;

use hlp::{build_graph, parse_edge_list, Format, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn load(name: &str) -> Graph {
    let path = data_path(name);
    let file = std::fs::File::open(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let edges = parse_edge_list(
        std::io::BufReader::new(file),
        Format::from_path(&path),
        None,
    )
    .unwrap();
    build_graph(&edges)
}

pub fn triangle() -> Graph {
    Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)])
}

pub fn two_triangles() -> Graph {
    Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
}

pub fn k4() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

/// G(n, p)-style graph with exactly `m` distinct edges drawn uniformly.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_edges = n * n.saturating_sub(1) / 2;
    let m = m.min(max_edges);
    let mut set = HashSet::with_capacity(m);
    while set.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            set.insert((u.min(v), u.max(v)));
        }
    }
    Graph::from_edges(n, set)
}

/// Random graph with a random size and density, `n <= max_n`.
pub fn random_small_graph(max_n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.gen_range(2..=max_n);
    let avg_deg = rng.gen_range(0.5..8.0);
    let m = ((n as f64 * avg_deg) / 2.0) as usize;
    random_graph(n, m, seed)
}

/// Planted-partition graph: `blocks` groups of `size` nodes, dense inside,
/// sparse between.
pub fn planted_partition(blocks: usize, size: usize, p_in: f64, p_out: f64, seed: u64) -> Graph {
    let n = blocks * size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if u / size == v / size { p_in } else { p_out };
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

fn compact(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Labels a node may adopt: its own if it ties for the most frequent
/// neighbor label, otherwise any most frequent neighbor label.
fn choices(g: &Graph, labels: &[usize], v: usize) -> Vec<usize> {
    if g.degree(v) == 0 {
        return vec![labels[v]];
    }
    let mut counts = std::collections::BTreeMap::new();
    for u in g.neighbors(v) {
        *counts.entry(labels[u]).or_insert(0usize) += 1;
    }
    let best = *counts.values().max().unwrap();
    if counts.get(&labels[v]) == Some(&best) {
        return vec![labels[v]];
    }
    counts
        .into_iter()
        .filter(|&(_, c)| c == best)
        .map(|(l, _)| l)
        .collect()
}

/// Every final partition reachable by asynchronous label propagation with
/// freezing threshold `delta` (a label change wakes frozen neighbors), over
/// all visiting orders and all tie-break outcomes. Exhaustive; only usable on graphs with a handful of nodes.
pub fn lp_reachable_outcomes(g: &Graph, delta: usize) -> BTreeSet<Vec<usize>> {
    type State = (Vec<usize>, Vec<usize>);
    let n = g.n();
    let start: State = ((0..n).collect(), vec![0; n]);
    let mut seen: HashSet<State> = HashSet::new();
    let mut stack = vec![start];
    let mut outcomes = BTreeSet::new();
    while let Some((labels, stable)) = stack.pop() {
        if !seen.insert((labels.clone(), stable.clone())) {
            continue;
        }
        let active: Vec<usize> = (0..n).filter(|&v| stable[v] < delta).collect();
        if active.is_empty() {
            outcomes.insert(compact(&labels));
            continue;
        }
        for order in permutations(&active) {
            // branch over tie-breaks along this order
            let mut partial: Vec<(Vec<usize>, Vec<usize>, bool)> =
                vec![(labels.clone(), stable.clone(), false)];
            for &v in &order {
                let mut next = Vec::new();
                for (l, s, changed) in partial {
                    for c in choices(g, &l, v) {
                        let (mut l2, mut s2) = (l.clone(), s.clone());
                        let moved = c != l2[v];
                        if moved {
                            l2[v] = c;
                            s2[v] = 0;
                            for u in g.neighbors(v) {
                                if s2[u] >= delta {
                                    s2[u] = 0;
                                }
                            }
                        } else {
                            s2[v] += 1;
                        }
                        next.push((l2, s2, changed || moved));
                    }
                }
                partial = next;
            }
            for (l, s, changed) in partial {
                if changed {
                    stack.push((l, s));
                } else {
                    outcomes.insert(compact(&l));
                }
            }
        }
    }
    outcomes
}
