//! Pattern registry built from OPLa annotations in the ontology.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::graph::{local_name, Graph, GraphPart, Term, Triple};
use crate::vocab::{opla, rdfs};

/// How many blank-node hops below a native class still belong to the
/// pattern's TBox implementation (restrictions, nested class expressions).
pub const AXIOM_CLOSURE_DEPTH: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("specialization cycle: {}", .0.join(" -> "))]
    CyclicSpecialization(Vec<String>),
    #[error("unknown pattern <{0}>")]
    UnknownPattern(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternDescriptor {
    pub id: String,
    pub label: String,
    pub native_classes: BTreeSet<String>,
    pub specializes: BTreeSet<String>,
}

/// Known patterns keyed by IRI.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PatternRegistry {
    patterns: BTreeMap<String, PatternDescriptor>,
}

/// The TBox subgraph of one pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternImplementation {
    pub pattern: String,
    pub subgraph: Graph,
}

/// A labelled relation between two patterns.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PatternEdge {
    pub source: String,
    pub label: String,
    pub target: String,
}

impl PatternRegistry {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&PatternDescriptor> {
        self.patterns.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.patterns.contains_key(id)
    }

    /// Patterns in IRI order.
    pub fn iter(&self) -> impl Iterator<Item = &PatternDescriptor> {
        self.patterns.values()
    }

    /// Every class declared native to some pattern.
    pub fn native_classes(&self) -> BTreeSet<&str> {
        self.patterns
            .values()
            .flat_map(|p| p.native_classes.iter().map(String::as_str))
            .collect()
    }

    fn entry(&mut self, id: &str, ontology: &Graph) -> &mut PatternDescriptor {
        self.patterns
            .entry(id.to_owned())
            .or_insert_with(|| PatternDescriptor {
                id: id.to_owned(),
                label: label_of(ontology, id),
                native_classes: BTreeSet::new(),
                specializes: BTreeSet::new(),
            })
    }
}

/// `rdfs:label` of an IRI in `graph`, or its local name.
pub fn label_of(graph: &Graph, iri: &str) -> String {
    graph
        .objects(&Term::iri(iri), rdfs::LABEL)
        .into_iter()
        .filter_map(|t| t.as_literal().map(|l| l.lexical.clone()))
        .min()
        .unwrap_or_else(|| local_name(iri).to_owned())
}

/// Builds the registry from the `opla:isNativeTo` and
/// `opla:specializationOfPattern` triples of an ontology graph.
pub fn load_registry(ontology: &Graph) -> Result<PatternRegistry, RegistryError> {
    let mut registry = PatternRegistry::default();
    for t in ontology.triples_matching(None, Some(&Term::iri(opla::IS_NATIVE_TO)), None) {
        let (Some(class), Some(pattern)) = (t.subject.as_iri(), t.object.as_iri()) else {
            continue;
        };
        registry
            .entry(pattern, ontology)
            .native_classes
            .insert(class.to_owned());
    }
    for t in ontology.triples_matching(
        None,
        Some(&Term::iri(opla::SPECIALIZATION_OF_PATTERN)),
        None,
    ) {
        let (Some(child), Some(parent)) = (t.subject.as_iri(), t.object.as_iri()) else {
            continue;
        };
        // Parents that are never described get an empty stub descriptor.
        registry.entry(parent, ontology);
        registry
            .entry(child, ontology)
            .specializes
            .insert(parent.to_owned());
    }
    if let Some(cycle) = find_cycle(&registry) {
        return Err(RegistryError::CyclicSpecialization(cycle));
    }
    Ok(registry)
}

fn find_cycle(registry: &PatternRegistry) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    fn visit(
        id: &str,
        registry: &PatternRegistry,
        marks: &mut BTreeMap<String, Mark>,
        stack: &mut Vec<String>,
    ) -> Option<Vec<String>> {
        match marks.get(id) {
            Some(Mark::Done) => return None,
            Some(Mark::Active) => {
                let start = stack.iter().position(|s| s == id).unwrap_or(0);
                let mut cycle = stack[start..].to_vec();
                cycle.push(id.to_owned());
                return Some(cycle);
            }
            None => {}
        }
        marks.insert(id.to_owned(), Mark::Active);
        stack.push(id.to_owned());
        if let Some(p) = registry.get(id) {
            for parent in &p.specializes {
                if let Some(c) = visit(parent, registry, marks, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        marks.insert(id.to_owned(), Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    for id in registry.patterns.keys() {
        let mut stack = Vec::new();
        if let Some(c) = visit(id, registry, &mut marks, &mut stack) {
            return Some(c);
        }
    }
    None
}

/// The ontology triples describing a pattern's native classes, plus the
/// blank-node (or skolemized) axiom structures hanging off them up to
/// [`AXIOM_CLOSURE_DEPTH`] hops.
pub fn implementation_of(
    registry: &PatternRegistry,
    ontology: &Graph,
    pattern: &str,
) -> Result<PatternImplementation, RegistryError> {
    let descriptor = registry
        .get(pattern)
        .ok_or_else(|| RegistryError::UnknownPattern(pattern.to_owned()))?;
    let mut subgraph = Graph::new(GraphPart::Ontology);
    let mut frontier: Vec<Term> = descriptor
        .native_classes
        .iter()
        .map(|c| Term::iri(c.as_str()))
        .collect();
    let mut visited: BTreeSet<Term> = frontier.iter().cloned().collect();
    for depth in 0..=AXIOM_CLOSURE_DEPTH {
        let mut next = Vec::new();
        for node in &frontier {
            for t in ontology.neighborhood(node) {
                if depth < AXIOM_CLOSURE_DEPTH
                    && t.object.is_blank_or_skolem()
                    && visited.insert(t.object.clone())
                {
                    next.push(t.object.clone());
                }
                subgraph.insert(t);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(PatternImplementation {
        pattern: pattern.to_owned(),
        subgraph,
    })
}

impl PatternImplementation {
    /// Subjects of the implementation that are not axiom nodes.
    pub fn classes(&self) -> BTreeSet<String> {
        self.subgraph
            .iter()
            .map(|t: Triple| t.subject)
            .filter(|s| !s.is_blank_or_skolem())
            .filter_map(|s| s.as_iri().map(str::to_owned))
            .collect()
    }
}

/// Direct specialization edges, sorted; no transitive closure.
pub fn pattern_relation_edges(registry: &PatternRegistry) -> Vec<PatternEdge> {
    let mut edges: Vec<PatternEdge> = registry
        .iter()
        .flat_map(|p| {
            p.specializes.iter().map(move |parent| PatternEdge {
                source: p.id.clone(),
                label: "specializes".to_owned(),
                target: parent.clone(),
            })
        })
        .collect();
    edges.sort();
    edges
}
