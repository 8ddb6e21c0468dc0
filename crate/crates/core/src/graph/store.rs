//! Indexed in-memory triple storage.
//!
//! Terms are interned into a dictionary and triples are kept in three
//! B-tree orderings (SPO, POS, OSP) so that any pattern with at least one
//! bound position resolves to a range scan.

use std::collections::{BTreeSet, HashMap};
use std::ops::Bound;

use serde::{Deserialize, Serialize};

use super::term::{skolem_iri, Term, Triple};

/// Which portion of a dataset a graph holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphPart {
    Ontology,
    Data,
    Annotation,
}

/// Index used to answer a lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexOrder {
    SubjectFirst,
    PredicateFirst,
    ObjectFirst,
}

impl IndexOrder {
    pub const ALL: [IndexOrder; 3] = [
        IndexOrder::SubjectFirst,
        IndexOrder::PredicateFirst,
        IndexOrder::ObjectFirst,
    ];
}

type Id = u32;
type Key = (Id, Id, Id);

/// A set of triples with three access orders.
#[derive(Debug, Clone)]
pub struct Graph {
    part: GraphPart,
    terms: Vec<Term>,
    ids: HashMap<Term, Id>,
    spo: BTreeSet<Key>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
}

impl Default for Graph {
    fn default() -> Self {
        Self::new(GraphPart::Data)
    }
}

impl PartialEq for Graph {
    /// Graphs are equal when they hold the same triple set, regardless of
    /// part tag or interning order.
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().all(|t| other.contains(&t))
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new(part: GraphPart) -> Self {
        Self {
            part,
            terms: Vec::new(),
            ids: HashMap::new(),
            spo: BTreeSet::new(),
            pos: BTreeSet::new(),
            osp: BTreeSet::new(),
        }
    }

    pub fn from_triples(part: GraphPart, triples: impl IntoIterator<Item = Triple>) -> Self {
        let mut g = Self::new(part);
        g.extend(triples);
        g
    }

    pub fn part(&self) -> GraphPart {
        self.part
    }

    pub fn set_part(&mut self, part: GraphPart) {
        self.part = part;
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    fn intern(&mut self, term: &Term) -> Id {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = Id::try_from(self.terms.len()).expect("term dictionary overflow");
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    fn id_of(&self, term: &Term) -> Option<Id> {
        self.ids.get(term).copied()
    }

    /// Inserts a triple, returning `false` if it was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let s = self.intern(&triple.subject);
        let p = self.intern(&triple.predicate);
        let o = self.intern(&triple.object);
        if !self.spo.insert((s, p, o)) {
            return false;
        }
        self.pos.insert((p, o, s));
        self.osp.insert((o, s, p));
        true
    }

    pub fn extend(&mut self, triples: impl IntoIterator<Item = Triple>) {
        for t in triples {
            self.insert(t);
        }
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        match (
            self.id_of(&triple.subject),
            self.id_of(&triple.predicate),
            self.id_of(&triple.object),
        ) {
            (Some(s), Some(p), Some(o)) => self.spo.contains(&(s, p, o)),
            _ => false,
        }
    }

    fn materialize(&self, (s, p, o): Key) -> Triple {
        Triple {
            subject: self.terms[s as usize].clone(),
            predicate: self.terms[p as usize].clone(),
            object: self.terms[o as usize].clone(),
        }
    }

    /// All triples in subject-predicate-object order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().map(move |&k| self.materialize(k))
    }

    /// Triples matching the given bound positions, answered with the most
    /// selective index.
    pub fn triples_matching(
        &self,
        subject: Option<&Term>,
        predicate: Option<&Term>,
        object: Option<&Term>,
    ) -> Vec<Triple> {
        let order = match (subject.is_some(), predicate.is_some(), object.is_some()) {
            (true, _, false) | (true, true, true) => IndexOrder::SubjectFirst,
            (false, true, _) => IndexOrder::PredicateFirst,
            (_, false, true) => IndexOrder::ObjectFirst,
            (false, false, false) => IndexOrder::SubjectFirst,
        };
        self.triples_matching_with(order, subject, predicate, object)
    }

    /// Like [`Graph::triples_matching`], but forces the lookup through one
    /// index. Positions the index cannot range over are filtered.
    pub fn triples_matching_with(
        &self,
        order: IndexOrder,
        subject: Option<&Term>,
        predicate: Option<&Term>,
        object: Option<&Term>,
    ) -> Vec<Triple> {
        let resolve = |t: Option<&Term>| -> Option<Option<Id>> {
            match t {
                None => Some(None),
                Some(t) => self.id_of(t).map(Some),
            }
        };
        let (Some(s), Some(p), Some(o)) = (resolve(subject), resolve(predicate), resolve(object))
        else {
            return Vec::new();
        };
        // Rotate the pattern into the chosen index's key order.
        let (index, a, b, c) = match order {
            IndexOrder::SubjectFirst => (&self.spo, s, p, o),
            IndexOrder::PredicateFirst => (&self.pos, p, o, s),
            IndexOrder::ObjectFirst => (&self.osp, o, s, p),
        };
        let unrotate = |(x, y, z): Key| -> Key {
            match order {
                IndexOrder::SubjectFirst => (x, y, z),
                IndexOrder::PredicateFirst => (z, x, y),
                IndexOrder::ObjectFirst => (y, z, x),
            }
        };
        let keys: Box<dyn Iterator<Item = &Key>> = match (a, b) {
            (Some(a), Some(b)) => Box::new(
                index.range((Bound::Included((a, b, 0)), Bound::Included((a, b, Id::MAX)))),
            ),
            (Some(a), None) => Box::new(index.range((
                Bound::Included((a, 0, 0)),
                Bound::Included((a, Id::MAX, Id::MAX)),
            ))),
            (None, _) => Box::new(index.iter()),
        };
        keys.filter(|&&(x, y, z)| {
            a.is_none_or(|v| v == x) && b.is_none_or(|v| v == y) && c.is_none_or(|v| v == z)
        })
        .map(|&k| self.materialize(unrotate(k)))
        .collect()
    }

    /// All triples whose subject is `node`.
    pub fn neighborhood(&self, node: &Term) -> Vec<Triple> {
        self.triples_matching(Some(node), None, None)
    }

    /// Objects of `subject predicate ?o`.
    pub fn objects(&self, subject: &Term, predicate: &str) -> Vec<Term> {
        self.triples_matching(Some(subject), Some(&Term::iri(predicate)), None)
            .into_iter()
            .map(|t| t.object)
            .collect()
    }

    /// Subjects of `?s predicate object`.
    pub fn subjects(&self, predicate: &str, object: &Term) -> Vec<Term> {
        self.triples_matching(None, Some(&Term::iri(predicate)), Some(object))
            .into_iter()
            .map(|t| t.subject)
            .collect()
    }

    /// The smallest object of `subject predicate ?o`, if any.
    pub fn first_object(&self, subject: &Term, predicate: &str) -> Option<Term> {
        self.objects(subject, predicate).into_iter().min()
    }

    /// Whether `term` occurs anywhere in the graph.
    pub fn mentions(&self, term: &Term) -> bool {
        self.id_of(term).is_some_and(|id| {
            let probe = |idx: &BTreeSet<Key>| {
                idx.range((id, 0, 0)..=(id, Id::MAX, Id::MAX))
                    .next()
                    .is_some()
            };
            probe(&self.spo) || probe(&self.pos) || probe(&self.osp)
        })
    }

    /// Replaces every blank node with a stable IRI under the skolem namespace.
    pub fn skolemize(&self, doc_id: &str) -> Graph {
        let map = |t: &Term| match t {
            Term::BlankNode { value } => Term::iri(skolem_iri(doc_id, value)),
            other => other.clone(),
        };
        Graph::from_triples(
            self.part,
            self.iter().map(|t| Triple {
                subject: map(&t.subject),
                predicate: t.predicate,
                object: map(&t.object),
            }),
        )
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph::from_triples(GraphPart::Data, iter)
    }
}
