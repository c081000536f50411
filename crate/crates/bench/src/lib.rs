//! Shared instance builders for the benchmarks.

use hyperorder::graphs::{complete_3uniform, line_graph, Graph};

/// The line graph of the complete 3-uniform hypergraph on `n` vertices.
pub fn line_graph_k3(n: i64) -> Graph {
    line_graph(&complete_3uniform(n).expect("n >= 3"))
}
