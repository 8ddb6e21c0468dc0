//! Pattern occurrences: detection from templates, instance IRIs, and the
//! extended-OPLa annotation layout (write and read back).

mod template;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub use template::{parse_templates, render_templates, PatternTemplate, TemplateError};

use crate::graph::{
    extend_solutions, local_name, match_bgp, Graph, GraphPart, Solution, Term, Triple,
    TriplePattern,
};
use crate::vocab::{opla, rdf};

/// Prefix of minted pattern-instance IRIs.
pub const INSTANCE_PREFIX: &str = "urn:opla-instance:";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OccurrenceError {
    #[error("cannot mint an instance IRI for an empty member set")]
    EmptyMembers,
    #[error("malformed annotation for <{instance}>: {reason}")]
    MalformedAnnotation { instance: String, reason: String },
}

/// One materialization of a pattern in instance data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub pattern: String,
    pub instance: String,
    /// The node the occurrence was grouped on; `None` until resolved for
    /// occurrences read back from annotations.
    pub anchor: Option<Term>,
    pub members: BTreeSet<Term>,
    pub triples: BTreeSet<Triple>,
}

/// Finds one occurrence per distinct anchor binding, ordered by anchor.
pub fn detect_occurrences(data: &Graph, template: &PatternTemplate) -> Vec<Occurrence> {
    let bindings = match_bgp(data, &template.required);
    let mut out = Vec::new();
    for (anchor, group) in bindings.groups() {
        let Some(anchor) = anchor else { continue };
        let mut solutions: Vec<Solution> = group.into_iter().cloned().collect();
        for opt in &template.optional {
            solutions = left_join(data, opt, solutions);
        }
        let mut members = BTreeSet::new();
        let mut triples = BTreeSet::new();
        for s in &solutions {
            for var in &template.members {
                if let Some(t) = s.get(var).filter(|t| !t.is_literal()) {
                    members.insert(t.clone());
                }
            }
            for tp in template
                .required
                .patterns()
                .iter()
                .chain(&template.optional)
            {
                if let Some(t) = instantiate(tp, s) {
                    triples.insert(t);
                }
            }
        }
        let instance =
            mint_instance_iri(&template.pattern, &members).expect("anchor is always a member");
        out.push(Occurrence {
            pattern: template.pattern.clone(),
            instance,
            anchor: Some(anchor),
            members,
            triples,
        });
    }
    out
}

fn left_join(data: &Graph, pattern: &TriplePattern, solutions: Vec<Solution>) -> Vec<Solution> {
    let mut out = Vec::with_capacity(solutions.len());
    for s in solutions {
        let extended = extend_solutions(data, std::slice::from_ref(pattern), vec![s.clone()], None);
        if extended.is_empty() {
            out.push(s);
        } else {
            out.extend(extended);
        }
    }
    out
}

fn instantiate(tp: &TriplePattern, s: &Solution) -> Option<Triple> {
    let get = |p: &crate::graph::TermPattern| match p {
        crate::graph::TermPattern::Term(t) => Some(t.clone()),
        crate::graph::TermPattern::Var(v) => s.get(v).cloned(),
    };
    Triple::try_new(get(&tp.subject)?, get(&tp.predicate)?, get(&tp.object)?).ok()
}

/// `urn:opla-instance:<pattern local name>:<sha256 of sorted members>`.
///
/// Members are hashed in their N-Triples form, sorted and newline-joined,
/// so the IRI does not depend on input order.
pub fn mint_instance_iri<'a>(
    pattern: &str,
    members: impl IntoIterator<Item = &'a Term>,
) -> Result<String, OccurrenceError> {
    let mut keys: Vec<String> = members.into_iter().map(ToString::to_string).collect();
    if keys.is_empty() {
        return Err(OccurrenceError::EmptyMembers);
    }
    keys.sort();
    keys.dedup();
    let digest = Sha256::digest(keys.join("\n").as_bytes());
    Ok(format!(
        "{INSTANCE_PREFIX}{}:{}",
        local_name(pattern),
        hex::encode(digest)
    ))
}

/// Emits `2 + 2·|members|` annotation triples per occurrence.
pub fn annotate(occurrences: &[Occurrence]) -> Graph {
    let mut g = Graph::new(GraphPart::Annotation);
    let rdf_type = Term::iri(rdf::TYPE);
    let instance_of = Term::iri(opla::IS_PATTERN_INSTANCE_OF);
    let belongs = Term::iri(opla::BELONGS_TO_PATTERN_INSTANCE);
    let has_member = Term::iri(opla::HAS_PATTERN_INSTANCE_MEMBER);
    for occ in occurrences {
        let inst = Term::iri(occ.instance.as_str());
        g.insert(Triple::new(
            inst.clone(),
            rdf_type.clone(),
            Term::iri(opla::PATTERN_INSTANCE),
        ));
        g.insert(Triple::new(
            inst.clone(),
            instance_of.clone(),
            Term::iri(occ.pattern.as_str()),
        ));
        for m in &occ.members {
            g.insert(Triple::new(m.clone(), belongs.clone(), inst.clone()));
            g.insert(Triple::new(inst.clone(), has_member.clone(), m.clone()));
        }
    }
    g
}

/// Checks every `opla:PatternInstance` node in `annotations` and returns
/// the pattern each one instantiates.
pub fn annotated_instances(
    annotations: &Graph,
) -> Result<BTreeMap<String, String>, OccurrenceError> {
    let mut nodes: BTreeSet<Term> = annotations
        .subjects(rdf::TYPE, &Term::iri(opla::PATTERN_INSTANCE))
        .into_iter()
        .collect();
    nodes.extend(
        annotations
            .triples_matching(None, Some(&Term::iri(opla::IS_PATTERN_INSTANCE_OF)), None)
            .into_iter()
            .map(|t| t.subject),
    );
    let mut out = BTreeMap::new();
    for node in nodes {
        let instance = node.value().to_owned();
        let malformed = |reason: &str| OccurrenceError::MalformedAnnotation {
            instance: instance.clone(),
            reason: reason.to_owned(),
        };
        let patterns = annotations.objects(&node, opla::IS_PATTERN_INSTANCE_OF);
        let pattern = match patterns.as_slice() {
            [] => return Err(malformed("no opla:isPatternInstanceOf")),
            [p] => p
                .as_iri()
                .ok_or_else(|| malformed("pattern is not an IRI"))?,
            _ => return Err(malformed("more than one opla:isPatternInstanceOf")),
        };
        if annotations
            .objects(&node, opla::HAS_PATTERN_INSTANCE_MEMBER)
            .is_empty()
        {
            return Err(malformed("no members"));
        }
        out.insert(instance, pattern.to_owned());
    }
    Ok(out)
}

/// Rebuilds the occurrences of `pattern` from annotations alone; each
/// occurrence's triples are the member-induced subgraph of `data`.
pub fn occurrences_of(
    data: &Graph,
    annotations: &Graph,
    pattern: &str,
) -> Result<Vec<Occurrence>, OccurrenceError> {
    let instances = annotated_instances(annotations)?;
    let mut out = Vec::new();
    for (instance, p) in instances {
        if p != pattern {
            continue;
        }
        let node = Term::iri(instance.as_str());
        let members: BTreeSet<Term> = annotations
            .objects(&node, opla::HAS_PATTERN_INSTANCE_MEMBER)
            .into_iter()
            .collect();
        out.push(Occurrence {
            pattern: p,
            instance,
            anchor: None,
            triples: induced_triples(data, &members),
            members,
        });
    }
    Ok(out)
}

/// Rebuilds a single annotated instance, or `None` if `instance` is not
/// annotated as a pattern instance.
pub fn occurrence_for_instance(
    data: &Graph,
    annotations: &Graph,
    instance: &str,
) -> Result<Option<Occurrence>, OccurrenceError> {
    let node = Term::iri(instance);
    let malformed = |reason: &str| OccurrenceError::MalformedAnnotation {
        instance: instance.to_owned(),
        reason: reason.to_owned(),
    };
    let pattern = match annotations
        .objects(&node, opla::IS_PATTERN_INSTANCE_OF)
        .as_slice()
    {
        [] => return Ok(None),
        [p] => p
            .as_iri()
            .ok_or_else(|| malformed("pattern is not an IRI"))?
            .to_owned(),
        _ => return Err(malformed("more than one opla:isPatternInstanceOf")),
    };
    let members: BTreeSet<Term> = annotations
        .objects(&node, opla::HAS_PATTERN_INSTANCE_MEMBER)
        .into_iter()
        .collect();
    if members.is_empty() {
        return Err(malformed("no members"));
    }
    Ok(Some(Occurrence {
        pattern,
        instance: instance.to_owned(),
        anchor: None,
        triples: induced_triples(data, &members),
        members,
    }))
}

/// Data triples whose subject and object are both in `members`.
pub fn induced_triples(data: &Graph, members: &BTreeSet<Term>) -> BTreeSet<Triple> {
    members
        .iter()
        .flat_map(|m| data.neighborhood(m))
        .filter(|t| members.contains(&t.object))
        .collect()
}

/// Recovers the anchor of an annotation-derived occurrence: the member
/// that, bound to the template's anchor variable, yields required matches
/// staying inside the member set and covering the most members.
pub fn infer_anchor(
    template: &PatternTemplate,
    occurrence: &Occurrence,
    data: &Graph,
) -> Option<Term> {
    let mut best: Option<(usize, &Term)> = None;
    for candidate in &occurrence.members {
        let seed = Solution::from([(template.anchor.clone(), candidate.clone())]);
        let solutions = extend_solutions(data, template.required.patterns(), vec![seed], None);
        if solutions.is_empty() {
            continue;
        }
        let mut covered = BTreeSet::new();
        let mut inside = true;
        for s in &solutions {
            for var in &template.members {
                if let Some(t) = s.get(var).filter(|t| !t.is_literal()) {
                    if occurrence.members.contains(t) {
                        covered.insert(t);
                    } else {
                        inside = false;
                    }
                }
            }
        }
        if !inside {
            continue;
        }
        if best.is_none_or(|(n, _)| covered.len() > n) {
            best = Some((covered.len(), candidate));
        }
    }
    best.map(|(_, t)| t.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Term {
        Term::iri(format!("http://e/{s}"))
    }

    fn part_of() -> PatternTemplate {
        parse_templates(
            "PATTERN <http://e/odp/PartOf>\nANCHOR ?obj\nREQUIRED ?obj <http://e/hasPart> ?part\n\
             OPTIONAL ?part <http://e/label> ?l\nMEMBERS ?obj ?part ?l\n",
        )
        .unwrap()
        .remove(0)
    }

    fn has_part(a: &str, b: &str) -> Triple {
        Triple::new(e(a), e("hasPart"), e(b))
    }

    #[test]
    fn groups_by_anchor() {
        let g = Graph::from_triples(GraphPart::Data, [has_part("A", "P1"), has_part("A", "P2")]);
        let occ = detect_occurrences(&g, &part_of());
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].members, BTreeSet::from([e("A"), e("P1"), e("P2")]));
        assert_eq!(occ[0].anchor, Some(e("A")));
        assert_eq!(occ[0].triples.len(), 2);
    }

    #[test]
    fn disjoint_wholes() {
        let g = Graph::from_triples(GraphPart::Data, [has_part("B", "P2"), has_part("A", "P1")]);
        let occ = detect_occurrences(&g, &part_of());
        assert_eq!(occ.len(), 2);
        assert_eq!(occ[0].anchor, Some(e("A")));
        assert!(occ[0].members.is_disjoint(&occ[1].members));
        assert!(detect_occurrences(&Graph::new(GraphPart::Data), &part_of()).is_empty());
    }

    #[test]
    fn optional_literals_are_not_members() {
        let g = Graph::from_triples(
            GraphPart::Data,
            [
                has_part("A", "P1"),
                Triple::new(e("P1"), e("label"), Term::string("part one")),
            ],
        );
        let occ = detect_occurrences(&g, &part_of());
        assert_eq!(occ[0].members, BTreeSet::from([e("A"), e("P1")]));
        assert_eq!(
            occ[0].triples.len(),
            2,
            "literal triple kept in the subgraph"
        );
    }

    #[test]
    fn instance_iri_properties() {
        let a = mint_instance_iri("http://e/odp/PartOf", &[e("x"), e("y")]).unwrap();
        let b = mint_instance_iri("http://e/odp/PartOf", &[e("y"), e("x")]).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("urn:opla-instance:PartOf:"));
        let c = mint_instance_iri("http://e/odp/PartOf", &[e("y"), e("z")]).unwrap();
        assert_ne!(a, c);
        let single = mint_instance_iri("http://e/odp/PartOf", &[e("x")]).unwrap();
        assert!(single.contains("PartOf"));
        assert_eq!(
            mint_instance_iri("http://e/odp/PartOf", &[]),
            Err(OccurrenceError::EmptyMembers)
        );
    }

    #[test]
    fn annotation_layout() {
        let g = Graph::from_triples(
            GraphPart::Data,
            [
                has_part("A", "P1"),
                has_part("A", "P2"),
                has_part("B", "P3"),
            ],
        );
        let occ = detect_occurrences(&g, &part_of());
        let ann = annotate(&occ);
        assert_eq!(ann.part(), GraphPart::Annotation);
        assert_eq!(ann.len(), (2 + 2 * 3) + (2 + 2 * 2));
        assert!(annotate(&[]).is_empty());
    }

    #[test]
    fn read_back_round_trip() {
        let g = Graph::from_triples(
            GraphPart::Data,
            [
                has_part("A", "P1"),
                has_part("A", "P2"),
                has_part("B", "P3"),
            ],
        );
        let detected = detect_occurrences(&g, &part_of());
        let ann = annotate(&detected);
        let back = occurrences_of(&g, &ann, "http://e/odp/PartOf").unwrap();
        assert_eq!(back.len(), detected.len());
        for (a, b) in detected.iter().zip(&back) {
            assert_eq!(a.instance, b.instance);
            assert_eq!(a.members, b.members);
            assert_eq!(infer_anchor(&part_of(), b, &g), a.anchor);
        }
        assert!(occurrences_of(&g, &ann, "http://e/odp/Other")
            .unwrap()
            .is_empty());
    }

    #[test]
    fn single_instance_read_back() {
        let g = Graph::from_triples(GraphPart::Data, [has_part("A", "P1"), has_part("B", "P3")]);
        let detected = detect_occurrences(&g, &part_of());
        let ann = annotate(&detected);
        let one = occurrence_for_instance(&g, &ann, &detected[1].instance)
            .unwrap()
            .unwrap();
        assert_eq!(one.members, detected[1].members);
        assert_eq!(one.triples, detected[1].triples);
        assert_eq!(
            occurrence_for_instance(&g, &ann, "urn:nothing").unwrap(),
            None
        );
    }

    #[test]
    fn hand_written_annotations() {
        let ttl = "@prefix opla: <http://ontologydesignpatterns.org/opla/> .\n\
            <urn:i:1> a opla:PatternInstance ; opla:isPatternInstanceOf <http://e/odp/X> ;\n\
              opla:hasPatternInstanceMember <http://e/m1>, <http://e/m2> .\n";
        let ann =
            crate::graph::parse_document(ttl, crate::graph::Format::TurtleSubset, None).unwrap();
        let occ = occurrences_of(&Graph::new(GraphPart::Data), &ann, "http://e/odp/X").unwrap();
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].members, BTreeSet::from([e("m1"), e("m2")]));
    }

    #[test]
    fn malformed_annotations() {
        let missing_pattern = Graph::from_triples(
            GraphPart::Annotation,
            [Triple::new(
                Term::iri("urn:i:1"),
                Term::iri(rdf::TYPE),
                Term::iri(opla::PATTERN_INSTANCE),
            )],
        );
        assert!(matches!(
            occurrences_of(&Graph::default(), &missing_pattern, "http://e/odp/X"),
            Err(OccurrenceError::MalformedAnnotation { .. })
        ));
        let no_members = Graph::from_triples(
            GraphPart::Annotation,
            [Triple::new(
                Term::iri("urn:i:1"),
                Term::iri(opla::IS_PATTERN_INSTANCE_OF),
                e("odp/X"),
            )],
        );
        assert!(matches!(
            occurrences_of(&Graph::default(), &no_members, "http://e/odp/X"),
            Err(OccurrenceError::MalformedAnnotation { .. })
        ));
    }
}
