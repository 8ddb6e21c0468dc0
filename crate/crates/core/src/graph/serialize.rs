//! N-Triples writer.

use std::fmt::Write;

use super::store::Graph;

/// Output syntax. Only N-Triples is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    NTriples,
}

/// Serializes a graph, one statement per line in SPO order.
pub fn serialize_graph(graph: &Graph, format: OutputFormat) -> String {
    match format {
        OutputFormat::NTriples => {
            let mut out = String::new();
            for t in graph.iter() {
                writeln!(out, "{t}").expect("writing to a String cannot fail");
            }
            out
        }
    }
}
