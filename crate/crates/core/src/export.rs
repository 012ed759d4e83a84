//! JSON hierarchy documents and per-level DOT supergraphs.

use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::{CompressedHierarchy, Hierarchy};
use crate::labelprop::{Assignment, LpParams};
use crate::metrics::{community_edge_stats, modularity};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub max_iters: usize,
    pub delta: usize,
    pub seed: u64,
}

impl From<&LpParams> for ParamsRecord {
    fn from(p: &LpParams) -> Self {
        ParamsRecord {
            max_iters: p.max_iters,
            delta: p.delta,
            seed: p.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub params: ParamsRecord,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    /// Size of the graph this level partitioned.
    pub nodes: usize,
    pub edges: usize,
    pub communities: usize,
    pub supernodes: usize,
    pub superedges: usize,
    pub iterations: usize,
    pub elapsed: f64,
    /// Against the base graph; absent when the base graph has no edges.
    pub modularity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyDocument {
    pub meta: Meta,
    pub levels: Vec<LevelRecord>,
    pub assignments: CompressedHierarchy,
}

impl HierarchyDocument {
    pub fn new(h: &Hierarchy, graph_name: &str, params: &LpParams) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::EmptyHierarchy);
        }
        let base = h.base();
        let levels = h
            .levels()
            .iter()
            .enumerate()
            .map(|(i, level)| {
                let t = i + 1;
                let q = if base.m() == 0 {
                    None
                } else {
                    Some(modularity(base, &h.project_to_base(t)?)?)
                };
                Ok(LevelRecord {
                    level: t,
                    nodes: level.stats.nodes,
                    edges: level.stats.edges,
                    communities: level.assignment.k(),
                    supernodes: level.supergraph.n(),
                    superedges: level.supergraph.m(),
                    iterations: level.stats.iterations,
                    elapsed: level.stats.elapsed,
                    modularity: q,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HierarchyDocument {
            meta: Meta {
                graph: graph_name.to_string(),
                n: base.n(),
                m: base.m(),
                params: params.into(),
                seed: params.seed,
            },
            levels,
            assignments: h.compress(),
        })
    }
}

struct CountingWriter<W> {
    inner: W,
    written: usize,
}

impl<W: Write> Write for CountingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.written += n;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Writes the hierarchy as one pretty-printed JSON document and returns the
/// byte count.
pub fn write_hierarchy_json<W: Write>(
    h: &Hierarchy,
    graph_name: &str,
    params: &LpParams,
    sink: W,
) -> Result<usize> {
    let doc = HierarchyDocument::new(h, graph_name, params)?;
    write_document(&doc, sink)
}

pub fn write_document<W: Write>(doc: &HierarchyDocument, sink: W) -> Result<usize> {
    let mut out = CountingWriter {
        inner: sink,
        written: 0,
    };
    serde_json::to_writer_pretty(&mut out, doc)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(out.written)
}

pub fn read_hierarchy_json<R: Read>(source: R) -> Result<HierarchyDocument> {
    Ok(serde_json::from_reader(source)?)
}

/// Writes the level-`t` supergraph in DOT.
///
/// Nodes carry `size` (base nodes in the community) and `degree`
/// (supergraph degree); edges carry `weight`, the number of base edges
/// between the two communities.
pub fn write_supergraph_dot<W: Write>(h: &Hierarchy, t: usize, sink: W) -> Result<usize> {
    let level = h.level(t)?;
    // base node -> level-t supernode id (surjective, so already compact)
    let mut base_to_super = h.levels()[0].assignment.labels().to_vec();
    for l in &h.levels()[1..t] {
        for c in base_to_super.iter_mut() {
            *c = l.assignment.community(*c);
        }
    }
    let on_base = Assignment::from_compact(base_to_super)?;
    let size_of = on_base.sizes();
    let cuts = community_edge_stats(h.base(), &on_base);

    let mut out = CountingWriter {
        inner: sink,
        written: 0,
    };
    writeln!(out, "graph level_{t} {{")?;
    let sg = &level.supergraph;
    for v in sg.nodes() {
        writeln!(out, "  {v} [size={}, degree={}];", size_of[v], sg.degree(v))?;
    }
    for (&(a, b), &w) in &cuts.pair_cuts {
        writeln!(out, "  {a} -- {b} [weight={w}];")?;
    }
    writeln!(out, "}}")?;
    out.flush()?;
    Ok(out.written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::hierarchy::build_hierarchy;

    fn two_triangles() -> Graph {
        Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    }

    fn dot_string(h: &Hierarchy, t: usize) -> String {
        let mut buf = Vec::new();
        let n = write_supergraph_dot(h, t, &mut buf).unwrap();
        assert_eq!(n, buf.len());
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn json_two_triangles() {
        let params = LpParams::default();
        let h = build_hierarchy(&two_triangles(), &params);
        let mut buf = Vec::new();
        let written = write_hierarchy_json(&h, "two-triangles", &params, &mut buf).unwrap();
        assert_eq!(written, buf.len());
        let doc = read_hierarchy_json(buf.as_slice()).unwrap();
        assert_eq!(doc.levels[0].communities, 2);
        assert_eq!(doc.meta.n, 6);
        assert_eq!(doc.meta.m, 7);
        let expanded = doc.assignments.expand().unwrap();
        for t in 1..=h.depth() {
            assert_eq!(expanded[t - 1], h.project_to_base(t).unwrap());
        }
    }

    #[test]
    fn json_single_node() {
        let params = LpParams::default();
        let h = build_hierarchy(&Graph::empty(1), &params);
        let mut buf = Vec::new();
        write_hierarchy_json(&h, "one", &params, &mut buf).unwrap();
        let doc = read_hierarchy_json(buf.as_slice()).unwrap();
        assert_eq!(doc.levels.len(), 1);
        assert_eq!(doc.levels[0].modularity, None);
    }

    #[test]
    fn json_empty_hierarchy_rejected() {
        let params = LpParams::default();
        let h = build_hierarchy(&Graph::empty(0), &params);
        assert!(matches!(
            write_hierarchy_json(&h, "none", &params, Vec::new()),
            Err(Error::EmptyHierarchy)
        ));
    }

    #[test]
    fn dot_two_nodes_one_edge() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let a = Assignment::from_compact(vec![0, 0, 1, 1]).unwrap();
        let h = Hierarchy::single_level(g, a, 1, 0.0);
        let dot = dot_string(&h, 1);
        assert_eq!(
            dot,
            "graph level_1 {\n  0 [size=2, degree=1];\n  1 [size=2, degree=1];\n  0 -- 1 [weight=1];\n}\n"
        );
    }

    #[test]
    fn dot_without_edges() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        let a = Assignment::from_compact(vec![0, 0, 1, 1]).unwrap();
        let h = Hierarchy::single_level(g, a, 1, 0.0);
        let dot = dot_string(&h, 1);
        assert!(!dot.contains("--"));
        assert_eq!(dot.matches("size=").count(), 2);
    }

    #[test]
    fn dot_k4_partition_weights() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let a = Assignment::from_compact(vec![0, 1, 2, 2]).unwrap();
        let h = Hierarchy::single_level(g, a, 1, 0.0);
        let dot = dot_string(&h, 1);
        assert!(dot.contains("0 -- 1 [weight=1];"));
        assert!(dot.contains("0 -- 2 [weight=2];"));
        assert!(dot.contains("1 -- 2 [weight=2];"));
        assert!(dot.contains("2 [size=2, degree=2];"));
    }

    #[test]
    fn dot_level_out_of_range() {
        let h = build_hierarchy(&two_triangles(), &LpParams::default());
        assert!(matches!(
            write_supergraph_dot(&h, 9, Vec::new()),
            Err(Error::LevelOutOfRange { .. })
        ));
    }
}
