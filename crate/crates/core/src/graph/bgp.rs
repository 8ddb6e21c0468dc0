//! Basic graph pattern matching (conjunctive triple patterns with joins).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::store::{Graph, IndexOrder};
use super::term::Term;

/// A named query variable, written `?name`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        Variable(name.strip_prefix('?').map(str::to_owned).unwrap_or(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// One position of a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermPattern {
    Term(Term),
    Var(Variable),
}

impl TermPattern {
    pub fn var(name: &str) -> Self {
        TermPattern::Var(Variable::new(name))
    }

    pub fn iri(iri: &str) -> Self {
        TermPattern::Term(Term::iri(iri))
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            TermPattern::Var(v) => Some(v),
            TermPattern::Term(_) => None,
        }
    }

    fn resolve<'a>(&'a self, solution: &'a Solution) -> Option<&'a Term> {
        match self {
            TermPattern::Term(t) => Some(t),
            TermPattern::Var(v) => solution.get(v),
        }
    }
}

impl From<Term> for TermPattern {
    fn from(t: Term) -> Self {
        TermPattern::Term(t)
    }
}

impl From<Variable> for TermPattern {
    fn from(v: Variable) -> Self {
        TermPattern::Var(v)
    }
}

impl fmt::Display for TermPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermPattern::Term(t) => t.fmt(f),
            TermPattern::Var(v) => v.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern {
    pub subject: TermPattern,
    pub predicate: TermPattern,
    pub object: TermPattern,
}

impl TriplePattern {
    pub fn new(
        subject: impl Into<TermPattern>,
        predicate: impl Into<TermPattern>,
        object: impl Into<TermPattern>,
    ) -> Self {
        Self {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter_map(TermPattern::as_var)
    }

    fn bound_positions(&self, solution: &Solution) -> usize {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter(|p| p.resolve(solution).is_some())
            .count()
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("group-by variable {0} does not occur in any triple pattern")]
    UnboundGroupBy(Variable),
}

/// A conjunction of triple patterns with an optional grouping variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicGraphPattern {
    patterns: Vec<TriplePattern>,
    group_by: Option<Variable>,
}

impl BasicGraphPattern {
    pub fn new(patterns: Vec<TriplePattern>) -> Self {
        Self {
            patterns,
            group_by: None,
        }
    }

    pub fn grouped(patterns: Vec<TriplePattern>, group_by: Variable) -> Result<Self, PatternError> {
        if !patterns
            .iter()
            .any(|p| p.variables().any(|v| *v == group_by))
        {
            return Err(PatternError::UnboundGroupBy(group_by));
        }
        Ok(Self {
            patterns,
            group_by: Some(group_by),
        })
    }

    pub fn patterns(&self) -> &[TriplePattern] {
        &self.patterns
    }

    pub fn group_by(&self) -> Option<&Variable> {
        self.group_by.as_ref()
    }

    /// Distinct variables in order of first appearance.
    pub fn variables(&self) -> Vec<Variable> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.patterns.iter().flat_map(TriplePattern::variables) {
            if seen.insert(v.clone()) {
                out.push(v.clone());
            }
        }
        out
    }
}

/// One solution: a binding for every variable of the pattern.
pub type Solution = BTreeMap<Variable, Term>;

/// The result of matching a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BindingSet {
    pub variables: Vec<Variable>,
    pub solutions: Vec<Solution>,
    group_by: Option<Variable>,
}

impl BindingSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// Solutions grouped by the pattern's group-by variable, groups ordered
    /// by the bound term. Without a group-by variable everything lands in a
    /// single group keyed by `None`.
    pub fn groups(&self) -> Vec<(Option<Term>, Vec<&Solution>)> {
        let Some(var) = &self.group_by else {
            return vec![(None, self.solutions.iter().collect())];
        };
        let mut groups: BTreeMap<&Term, Vec<&Solution>> = BTreeMap::new();
        for s in &self.solutions {
            groups.entry(&s[var]).or_default().push(s);
        }
        groups
            .into_iter()
            .map(|(k, v)| (Some(k.clone()), v))
            .collect()
    }
}

/// Matches `pattern` against `graph`.
pub fn match_bgp(graph: &Graph, pattern: &BasicGraphPattern) -> BindingSet {
    match_bgp_with(graph, pattern, None)
}

/// Matches `pattern`, routing every triple lookup through `index` when
/// given (otherwise the most selective index per lookup).
pub fn match_bgp_with(
    graph: &Graph,
    pattern: &BasicGraphPattern,
    index: Option<IndexOrder>,
) -> BindingSet {
    let solutions = extend_solutions(graph, &pattern.patterns, vec![Solution::new()], index);
    let mut unique: BTreeSet<Solution> = solutions.into_iter().collect();
    let solutions: Vec<Solution> = match &pattern.group_by {
        Some(var) => {
            let mut v: Vec<_> = std::mem::take(&mut unique).into_iter().collect();
            v.sort_by(|a, b| a[var].cmp(&b[var]).then_with(|| a.cmp(b)));
            v
        }
        None => unique.into_iter().collect(),
    };
    BindingSet {
        variables: pattern.variables(),
        solutions,
        group_by: pattern.group_by.clone(),
    }
}

/// Extends each seed solution with all matches of `patterns` (a join),
/// evaluating the most-bound pattern first at every step.
pub fn extend_solutions(
    graph: &Graph,
    patterns: &[TriplePattern],
    seeds: Vec<Solution>,
    index: Option<IndexOrder>,
) -> Vec<Solution> {
    let mut out = Vec::new();
    for seed in seeds {
        let mut remaining: Vec<&TriplePattern> = patterns.iter().collect();
        join(graph, &mut remaining, seed, index, &mut out);
    }
    out
}

fn join(
    graph: &Graph,
    remaining: &mut Vec<&TriplePattern>,
    solution: Solution,
    index: Option<IndexOrder>,
    out: &mut Vec<Solution>,
) {
    if remaining.is_empty() {
        out.push(solution);
        return;
    }
    let (pick, _) = remaining
        .iter()
        .enumerate()
        .max_by_key(|(i, p)| (p.bound_positions(&solution), std::cmp::Reverse(*i)))
        .expect("non-empty");
    let tp = remaining.remove(pick);
    let s = tp.subject.resolve(&solution).cloned();
    let p = tp.predicate.resolve(&solution).cloned();
    let o = tp.object.resolve(&solution).cloned();
    let candidates = match index {
        Some(order) => graph.triples_matching_with(order, s.as_ref(), p.as_ref(), o.as_ref()),
        None => graph.triples_matching(s.as_ref(), p.as_ref(), o.as_ref()),
    };
    for t in candidates {
        let mut next = solution.clone();
        if bind(&mut next, &tp.subject, &t.subject)
            && bind(&mut next, &tp.predicate, &t.predicate)
            && bind(&mut next, &tp.object, &t.object)
        {
            join(graph, remaining, next, index, out);
        }
    }
    remaining.insert(pick, tp);
}

fn bind(solution: &mut Solution, pattern: &TermPattern, term: &Term) -> bool {
    match pattern {
        TermPattern::Term(t) => t == term,
        TermPattern::Var(v) => match solution.get(v) {
            Some(existing) => existing == term,
            None => {
                solution.insert(v.clone(), term.clone());
                true
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphPart, Triple};

    fn e(s: &str) -> Term {
        Term::iri(format!("http://e/{s}"))
    }

    fn v(s: &str) -> TermPattern {
        TermPattern::var(s)
    }

    #[test]
    fn all_variables_over_one_triple() {
        let g = Graph::from_triples(GraphPart::Data, [Triple::new(e("a"), e("b"), e("c"))]);
        let r = match_bgp(
            &g,
            &BasicGraphPattern::new(vec![TriplePattern::new(v("s"), v("p"), v("o"))]),
        );
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn has_part_pattern() {
        let g = Graph::from_triples(
            GraphPart::Data,
            [
                Triple::new(e("A"), e("hasPart"), e("P1")),
                Triple::new(e("A"), e("hasPart"), e("P2")),
                Triple::new(e("B"), e("other"), e("C")),
            ],
        );
        let r = match_bgp(
            &g,
            &BasicGraphPattern::new(vec![TriplePattern::new(v("x"), e("hasPart"), v("y"))]),
        );
        let got: Vec<(Term, Term)> = r
            .solutions
            .iter()
            .map(|s| {
                (
                    s[&Variable::new("x")].clone(),
                    s[&Variable::new("y")].clone(),
                )
            })
            .collect();
        assert_eq!(got, vec![(e("A"), e("P1")), (e("A"), e("P2"))]);
    }

    #[test]
    fn repeated_variable_must_agree() {
        let g = Graph::from_triples(
            GraphPart::Data,
            [
                Triple::new(e("a"), e("p"), e("a")),
                Triple::new(e("a"), e("p"), e("b")),
            ],
        );
        let r = match_bgp(
            &g,
            &BasicGraphPattern::new(vec![TriplePattern::new(v("x"), e("p"), v("x"))]),
        );
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn group_by_must_be_used() {
        let pats = vec![TriplePattern::new(v("x"), e("p"), v("y"))];
        assert!(BasicGraphPattern::grouped(pats.clone(), Variable::new("z")).is_err());
        let bgp = BasicGraphPattern::grouped(pats, Variable::new("x")).unwrap();
        let g = Graph::from_triples(
            GraphPart::Data,
            [
                Triple::new(e("b"), e("p"), e("1")),
                Triple::new(e("a"), e("p"), e("2")),
                Triple::new(e("a"), e("p"), e("3")),
            ],
        );
        let groups = match_bgp(&g, &bgp)
            .groups()
            .into_iter()
            .map(|(k, s)| (k.unwrap(), s.len()))
            .collect::<Vec<_>>();
        assert_eq!(groups, vec![(e("a"), 2), (e("b"), 1)]);
    }

    #[test]
    fn empty_pattern_has_one_empty_solution() {
        let g = Graph::new(GraphPart::Data);
        assert_eq!(match_bgp(&g, &BasicGraphPattern::new(vec![])).len(), 1);
    }
}
