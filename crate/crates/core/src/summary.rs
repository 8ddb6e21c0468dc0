//! The pattern-level summary graph: patterns, key concepts ranked by degree
//! centrality over the ontology, specialization and `hasView` edges.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::graph::{Graph, Term};
use crate::opla::{label_of, pattern_relation_edges, PatternRegistry};
use crate::vocab::{owl, rdf, rdfs};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyConcept {
    pub class: String,
    pub importance: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Pattern,
    KeyConcept,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryNode {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
    pub size: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub occurrences: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub importance: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SummaryEdge {
    pub source: String,
    pub label: String,
    pub target: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SummaryGraph {
    pub nodes: Vec<SummaryNode>,
    pub edges: Vec<SummaryEdge>,
}

pub const HAS_VIEW: &str = "hasView";

/// Number of ontology triples mentioning `class` as subject or object.
pub fn degree_centrality(ontology: &Graph, class: &str) -> usize {
    let node = Term::iri(class);
    let as_subject = ontology.triples_matching(Some(&node), None, None);
    let as_object = ontology.triples_matching(None, None, Some(&node));
    // Self-loops appear in both lookups but are one triple.
    let loops = as_subject.iter().filter(|t| t.object == node).count();
    as_subject.len() + as_object.len() - loops
}

/// Declared classes (`owl:Class`, `rdfs:Class`) plus pattern-native classes.
pub fn declared_classes(ontology: &Graph, registry: &PatternRegistry) -> BTreeSet<String> {
    let mut classes: BTreeSet<String> = registry
        .native_classes()
        .into_iter()
        .map(str::to_owned)
        .collect();
    for class in [owl::CLASS, rdfs::CLASS] {
        for s in ontology.subjects(rdf::TYPE, &Term::iri(class)) {
            if let Some(iri) = s.as_iri().filter(|_| !s.is_blank_or_skolem()) {
                classes.insert(iri.to_owned());
            }
        }
    }
    classes
}

/// Classes with importance ≥ `threshold`, most important first, ties by IRI.
pub fn key_concepts(
    ontology: &Graph,
    registry: &PatternRegistry,
    threshold: usize,
) -> Vec<KeyConcept> {
    let mut out: Vec<KeyConcept> = declared_classes(ontology, registry)
        .into_iter()
        .map(|class| KeyConcept {
            importance: degree_centrality(ontology, &class),
            class,
        })
        .filter(|k| k.importance >= threshold)
        .collect();
    out.sort_by(|a, b| {
        b.importance
            .cmp(&a.importance)
            .then_with(|| a.class.cmp(&b.class))
    });
    out
}

/// `ln(count + 1)`.
pub fn node_size(occurrence_count: usize) -> f64 {
    (occurrence_count as f64).ln_1p()
}

/// Assembles the summary graph. Patterns missing from `counts` count as 0.
pub fn build_summary(
    ontology: &Graph,
    registry: &PatternRegistry,
    counts: &BTreeMap<String, usize>,
    threshold: usize,
) -> SummaryGraph {
    let mut nodes = Vec::new();
    for p in registry.iter() {
        let n = counts.get(&p.id).copied().unwrap_or(0);
        nodes.push(SummaryNode {
            id: p.id.clone(),
            kind: NodeKind::Pattern,
            label: p.label.clone(),
            size: node_size(n),
            occurrences: Some(n),
            importance: None,
        });
    }
    let concepts = key_concepts(ontology, registry, threshold);
    let mut edges: Vec<SummaryEdge> = pattern_relation_edges(registry)
        .into_iter()
        .map(|e| SummaryEdge {
            source: e.source,
            label: e.label,
            target: e.target,
        })
        .collect();
    for k in &concepts {
        nodes.push(SummaryNode {
            id: k.class.clone(),
            kind: NodeKind::KeyConcept,
            label: label_of(ontology, &k.class),
            size: (k.importance as f64).ln_1p(),
            occurrences: None,
            importance: Some(k.importance),
        });
        for p in registry.iter() {
            if p.native_classes.contains(&k.class) {
                edges.push(SummaryEdge {
                    source: k.class.clone(),
                    label: HAS_VIEW.to_owned(),
                    target: p.id.clone(),
                });
            }
        }
    }
    SummaryGraph { nodes, edges }
}
