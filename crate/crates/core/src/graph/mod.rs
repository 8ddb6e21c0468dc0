//! RDF data model, document I/O, indexed storage and pattern matching.

mod bgp;
mod parse;
mod serialize;
mod store;
mod term;

pub use bgp::{
    extend_solutions, match_bgp, match_bgp_with, BasicGraphPattern, BindingSet, PatternError,
    Solution, TermPattern, TriplePattern, Variable,
};
pub use parse::{parse_document, parse_document_with_warnings, Format, ParseError, ParseWarning};
pub use serialize::{serialize_graph, OutputFormat};
pub use store::{Graph, GraphPart, IndexOrder};
pub use term::{
    is_absolute_iri, local_name, skolem_iri, Literal, Term, Triple, TripleError, SKOLEM_PREFIX,
};

/// All triples with `node` as subject.
pub fn neighborhood(graph: &Graph, node: &Term) -> Vec<Triple> {
    graph.neighborhood(node)
}
