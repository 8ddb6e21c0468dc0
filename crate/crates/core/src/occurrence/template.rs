//! Declarative occurrence templates and their line-oriented file format.
//!
//! ```text
//! # comments and blank lines are ignored
//! PREFIX ex: <http://example.org/>
//! PATTERN <http://example.org/odp/PartOf>
//! NAME PartOf
//! ANCHOR ?whole
//! REQUIRED ?whole ex:hasPart ?part
//! OPTIONAL ?part ex:hasPart ?sub
//! MEMBERS ?whole ?part ?sub
//! ```
//!
//! Each `PATTERN` line starts a new template. `NAME` is optional and
//! defaults to the pattern IRI's local name.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{
    is_absolute_iri, local_name, BasicGraphPattern, Literal, Term, TermPattern, TriplePattern,
    Variable,
};
use crate::vocab::rdf;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("template <{pattern}>: {message}")]
    Invalid { pattern: String, message: String },
}

/// How to recognise occurrences of one pattern in instance data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternTemplate {
    pub pattern: String,
    pub name: String,
    pub anchor: Variable,
    pub required: BasicGraphPattern,
    pub optional: Vec<TriplePattern>,
    pub members: Vec<Variable>,
}

impl PatternTemplate {
    /// Validates and assembles a template.
    pub fn new(
        pattern: impl Into<String>,
        name: Option<String>,
        anchor: Variable,
        required: Vec<TriplePattern>,
        optional: Vec<TriplePattern>,
        members: Vec<Variable>,
    ) -> Result<Self, TemplateError> {
        let pattern = pattern.into();
        let invalid = |message: String| TemplateError::Invalid {
            pattern: pattern.clone(),
            message,
        };
        if required.is_empty() {
            return Err(invalid("no REQUIRED triple patterns".into()));
        }
        if !members.contains(&anchor) {
            return Err(invalid(format!("anchor {anchor} is not listed in MEMBERS")));
        }
        let required_vars: BTreeSet<&Variable> =
            required.iter().flat_map(TriplePattern::variables).collect();
        for opt in &optional {
            if !opt.variables().any(|v| required_vars.contains(v)) {
                return Err(invalid(format!(
                    "OPTIONAL {opt} shares no variable with the required patterns"
                )));
            }
        }
        let all_vars: BTreeSet<&Variable> = required_vars
            .iter()
            .copied()
            .chain(optional.iter().flat_map(TriplePattern::variables))
            .collect();
        if let Some(m) = members.iter().find(|m| !all_vars.contains(m)) {
            return Err(invalid(format!(
                "member {m} does not occur in any triple pattern"
            )));
        }
        let required = BasicGraphPattern::grouped(required, anchor.clone())
            .map_err(|e| invalid(e.to_string()))?;
        let name = name.unwrap_or_else(|| local_name(&pattern).to_owned());
        Ok(Self {
            pattern,
            name,
            anchor,
            required,
            optional,
            members,
        })
    }
}

#[derive(Default)]
struct Draft {
    line: usize,
    pattern: Option<String>,
    name: Option<String>,
    anchor: Option<Variable>,
    required: Vec<TriplePattern>,
    optional: Vec<TriplePattern>,
    members: Vec<Variable>,
}

impl Draft {
    fn finish(self) -> Result<Option<PatternTemplate>, TemplateError> {
        let Some(pattern) = self.pattern else {
            return Ok(None);
        };
        let anchor = self.anchor.ok_or_else(|| TemplateError::Syntax {
            line: self.line,
            message: format!("template <{pattern}> has no ANCHOR"),
        })?;
        PatternTemplate::new(
            pattern,
            self.name,
            anchor,
            self.required,
            self.optional,
            self.members,
        )
        .map(Some)
    }
}

/// Parses a template file holding one or more templates.
pub fn parse_templates(text: &str) -> Result<Vec<PatternTemplate>, TemplateError> {
    let mut prefixes: BTreeMap<String, String> = BTreeMap::new();
    let mut out = Vec::new();
    let mut draft = Draft::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| TemplateError::Syntax {
            line: line_no,
            message,
        };
        let (keyword, rest) = line
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((line, ""));
        let tokens = tokenize(rest).map_err(err)?;
        match keyword {
            "PREFIX" => {
                let [name, iri] = tokens.as_slice() else {
                    return Err(err("PREFIX expects `name: <iri>`".into()));
                };
                let Some(name) = name.strip_suffix(':') else {
                    return Err(err("prefix name must end with ':'".into()));
                };
                let iri = bracketed(iri).ok_or_else(|| err("PREFIX expects an <iri>".into()))?;
                prefixes.insert(name.to_owned(), iri.to_owned());
            }
            "PATTERN" => {
                if let Some(t) = std::mem::take(&mut draft).finish()? {
                    out.push(t);
                }
                let [iri] = tokens.as_slice() else {
                    return Err(err("PATTERN expects exactly one IRI".into()));
                };
                let iri = resolve_iri(iri, &prefixes).map_err(err)?;
                draft = Draft {
                    line: line_no,
                    pattern: Some(iri),
                    ..Draft::default()
                };
            }
            other => {
                if draft.pattern.is_none() {
                    return Err(err(format!("{other} before any PATTERN line")));
                }
                match other {
                    "NAME" => {
                        if rest.is_empty() {
                            return Err(err("NAME expects a value".into()));
                        }
                        draft.name = Some(rest.to_owned());
                    }
                    "ANCHOR" => {
                        let [v] = tokens.as_slice() else {
                            return Err(err("ANCHOR expects one variable".into()));
                        };
                        draft.anchor = Some(variable(v).map_err(err)?);
                    }
                    "REQUIRED" | "OPTIONAL" => {
                        let [s, p, o] = tokens.as_slice() else {
                            return Err(err(format!("{other} expects three terms")));
                        };
                        let tp = TriplePattern::new(
                            term_pattern(s, &prefixes, false).map_err(err)?,
                            term_pattern(p, &prefixes, true).map_err(err)?,
                            term_pattern(o, &prefixes, false).map_err(err)?,
                        );
                        if tp.subject.as_var().is_none()
                            && matches!(&tp.subject, TermPattern::Term(Term::Literal(_)))
                        {
                            return Err(err("literal in subject position".into()));
                        }
                        if other == "REQUIRED" {
                            draft.required.push(tp);
                        } else {
                            draft.optional.push(tp);
                        }
                    }
                    "MEMBERS" => {
                        if tokens.is_empty() {
                            return Err(err("MEMBERS expects at least one variable".into()));
                        }
                        for t in &tokens {
                            draft.members.push(variable(t).map_err(err)?);
                        }
                    }
                    _ => return Err(err(format!("unknown keyword {other}"))),
                }
            }
        }
    }
    if let Some(t) = draft.finish()? {
        out.push(t);
    }
    Ok(out)
}

fn tokenize(s: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut tok = String::new();
        if c == '"' {
            tok.push(chars.next().unwrap_or('"'));
            let mut closed = false;
            while let Some(c) = chars.next() {
                tok.push(c);
                if c == '\\' {
                    if let Some(n) = chars.next() {
                        tok.push(n);
                    }
                } else if c == '"' {
                    closed = true;
                    break;
                }
            }
            if !closed {
                return Err("unterminated string".into());
            }
        }
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            tok.push(c);
            chars.next();
        }
        out.push(tok);
    }
    Ok(out)
}

fn bracketed(tok: &str) -> Option<&str> {
    tok.strip_prefix('<')?.strip_suffix('>')
}

fn variable(tok: &str) -> Result<Variable, String> {
    match tok.strip_prefix('?') {
        Some(name) if !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_') => {
            Ok(Variable::new(name))
        }
        _ => Err(format!("expected a variable, found {tok:?}")),
    }
}

fn resolve_iri(tok: &str, prefixes: &BTreeMap<String, String>) -> Result<String, String> {
    if let Some(iri) = bracketed(tok) {
        if !is_absolute_iri(iri) {
            return Err(format!("relative IRI <{iri}>"));
        }
        return Ok(iri.to_owned());
    }
    if let Some((prefix, local)) = tok.split_once(':') {
        if let Some(ns) = prefixes.get(prefix) {
            return Ok(format!("{ns}{local}"));
        }
        return Err(format!("undeclared prefix {prefix:?}"));
    }
    Err(format!("expected an IRI, found {tok:?}"))
}

fn term_pattern(
    tok: &str,
    prefixes: &BTreeMap<String, String>,
    predicate: bool,
) -> Result<TermPattern, String> {
    if tok.starts_with('?') {
        return variable(tok).map(TermPattern::Var);
    }
    if predicate && tok == "a" {
        return Ok(TermPattern::iri(rdf::TYPE));
    }
    if let Some(rest) = tok.strip_prefix('"') {
        if predicate {
            return Err("literal in predicate position".into());
        }
        let end = rest.rfind('"').ok_or("unterminated string")?;
        let lexical = unescape(&rest[..end]);
        let suffix = &rest[end + 1..];
        let literal = if let Some(lang) = suffix.strip_prefix('@') {
            Literal::lang(lexical, lang)
        } else if let Some(dt) = suffix.strip_prefix("^^") {
            Literal::typed(lexical, resolve_iri(dt, prefixes)?)
        } else if suffix.is_empty() {
            Literal::simple(lexical)
        } else {
            return Err(format!("malformed literal {tok:?}"));
        };
        return Ok(TermPattern::Term(Term::Literal(literal)));
    }
    Ok(TermPattern::Term(Term::iri(resolve_iri(tok, prefixes)?)))
}

fn unescape(s: &str) -> String {
    let mut out = String::new();
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                Some(o) => out.push(o),
                None => {}
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Renders templates back into the file format.
pub fn render_templates(templates: &[PatternTemplate]) -> String {
    let mut out = String::new();
    for (i, t) in templates.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("PATTERN <{}>\n", t.pattern));
        out.push_str(&format!("NAME {}\n", t.name));
        out.push_str(&format!("ANCHOR {}\n", t.anchor));
        for p in t.required.patterns() {
            out.push_str(&format!("REQUIRED {p}\n"));
        }
        for p in &t.optional {
            out.push_str(&format!("OPTIONAL {p}\n"));
        }
        let members: Vec<String> = t.members.iter().map(ToString::to_string).collect();
        out.push_str(&format!("MEMBERS {}\n", members.join(" ")));
    }
    out
}
