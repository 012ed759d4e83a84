//! Hierarchical label propagation (hLP) for community detection.
//!
//! Label propagation finds communities on the input graph; each community is
//! then contracted to a supernode and propagation runs again on the
//! resulting supergraph, until a single supernode remains or nothing
//! merges. Every round costs time linear in the edges of the graph it runs
//! on, and the graphs only shrink.
//!
//! ```
//! use hlp::{build_hierarchy, best_level_modularity, Graph, LpParams};
//!
//! let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]);
//! let h = build_hierarchy(&g, &LpParams::default());
//! assert_eq!(h.levels()[0].assignment.k(), 2);
//! let (level, q) = best_level_modularity(&h).unwrap();
//! assert_eq!(level, 1);
//! assert!((q - 5.0 / 14.0).abs() < 1e-12);
//! ```

pub mod baselines;
pub mod cli;
pub mod error;
pub mod export;
pub mod graph;
pub mod hierarchy;
pub mod io;
pub mod labelprop;
pub mod metrics;

pub use baselines::{densest_subgraph_peel, kcore_split};
pub use error::{Error, Result};
pub use graph::{build_graph, core_decomposition, CoreDecomposition, Graph, NodeId};
pub use hierarchy::{
    build_hierarchy, create_super_graph, CompressedHierarchy, Hierarchy, Level, LevelStats,
};
pub use io::{parse_edge_list, EdgeList, Format, IndexBase};
pub use labelprop::{compact_labels, propagate, Assignment, LpParams, LpRun, LpState};
pub use metrics::{best_level_modularity, community_edge_stats, modularity, CommunityEdgeStats};
