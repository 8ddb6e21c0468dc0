//! RDF terms and triples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::vocab::{rdf, xsd};

/// A literal value: lexical form, datatype IRI and optional language tag.
///
/// Equality is exact on all three components; no value-space canonicalization
/// happens here (`"1"^^xsd:integer` and `"01"^^xsd:integer` are different).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub lexical: String,
    pub datatype: String,
    pub language: Option<String>,
}

impl Literal {
    /// A plain `xsd:string` literal.
    pub fn simple(lexical: impl Into<String>) -> Self {
        Self {
            lexical: lexical.into(),
            datatype: xsd::STRING.to_owned(),
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        Self {
            lexical: lexical.into(),
            datatype: datatype.into(),
            language: None,
        }
    }

    /// A language-tagged literal. Tags are lowercased; the datatype is always
    /// `rdf:langString`.
    pub fn lang(lexical: impl Into<String>, language: impl Into<String>) -> Self {
        Self {
            lexical: lexical.into(),
            datatype: rdf::LANG_STRING.to_owned(),
            language: Some(language.into().to_ascii_lowercase()),
        }
    }
}

/// An RDF term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Term {
    Iri { value: String },
    BlankNode { value: String },
    Literal(Literal),
}

impl Term {
    /// Builds an IRI term. The caller guarantees the IRI is absolute.
    pub fn iri(value: impl Into<String>) -> Self {
        let value = value.into();
        debug_assert!(is_absolute_iri(&value), "relative IRI {value:?}");
        Term::Iri { value }
    }

    pub fn blank(label: impl Into<String>) -> Self {
        Term::BlankNode {
            value: label.into(),
        }
    }

    pub fn literal(literal: Literal) -> Self {
        Term::Literal(literal)
    }

    pub fn string(lexical: impl Into<String>) -> Self {
        Term::Literal(Literal::simple(lexical))
    }

    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        Term::Literal(Literal::typed(lexical, datatype))
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri { value } => Some(value),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri { .. })
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode { .. })
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// True for blank nodes and for IRIs minted by skolemization.
    pub fn is_blank_or_skolem(&self) -> bool {
        match self {
            Term::BlankNode { .. } => true,
            Term::Iri { value } => value.starts_with(SKOLEM_PREFIX),
            Term::Literal(_) => false,
        }
    }

    /// The IRI string, blank node label, or lexical form.
    pub fn value(&self) -> &str {
        match self {
            Term::Iri { value } | Term::BlankNode { value } => value,
            Term::Literal(l) => &l.lexical,
        }
    }
}

impl fmt::Display for Term {
    /// N-Triples syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri { value } => {
                f.write_str("<")?;
                write_escaped_iri(f, value)?;
                f.write_str(">")
            }
            Term::BlankNode { value } => write!(f, "_:{value}"),
            Term::Literal(l) => {
                f.write_str("\"")?;
                write_escaped_string(f, &l.lexical)?;
                f.write_str("\"")?;
                if let Some(lang) = &l.language {
                    write!(f, "@{lang}")
                } else if l.datatype != xsd::STRING {
                    f.write_str("^^<")?;
                    write_escaped_iri(f, &l.datatype)?;
                    f.write_str(">")
                } else {
                    Ok(())
                }
            }
        }
    }
}

fn write_escaped_string(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\r' => f.write_str("\\r")?,
            '\t' => f.write_str("\\t")?,
            '\u{08}' => f.write_str("\\b")?,
            '\u{0C}' => f.write_str("\\f")?,
            c if (c as u32) < 0x20 || c == '\u{7F}' => write!(f, "\\u{:04X}", c as u32)?,
            c => write!(f, "{c}")?,
        }
    }
    Ok(())
}

fn write_escaped_iri(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    for c in s.chars() {
        match c {
            '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\' => {
                write!(f, "\\u{:04X}", c as u32)?
            }
            c if (c as u32) <= 0x20 => write!(f, "\\u{:04X}", c as u32)?,
            c => write!(f, "{c}")?,
        }
    }
    Ok(())
}

/// Reserved namespace for skolemized blank nodes.
pub const SKOLEM_PREFIX: &str = "urn:skolem:";

/// Stable IRI for blank node `label` of document `doc_id`.
pub fn skolem_iri(doc_id: &str, label: &str) -> String {
    format!("{SKOLEM_PREFIX}{doc_id}:{label}")
}

/// An IRI is absolute when it starts with a scheme followed by `:`.
pub fn is_absolute_iri(iri: &str) -> bool {
    let Some(colon) = iri.find(':') else {
        return false;
    };
    let scheme = &iri[..colon];
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

/// The fragment or last path segment of an IRI, used as a fallback label.
pub fn local_name(iri: &str) -> &str {
    let trimmed = iri.trim_end_matches(['/', '#']);
    let cut = trimmed.rfind(['#', '/', ':']).map(|i| i + 1).unwrap_or(0);
    let name = &trimmed[cut..];
    if name.is_empty() {
        iri
    } else {
        name
    }
}

/// Error raised when a triple is built with a term in a forbidden position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TripleError {
    #[error("literal {0} cannot be a subject")]
    LiteralSubject(String),
    #[error("predicate {0} must be an IRI")]
    NonIriPredicate(String),
}

/// A subject–predicate–object statement.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn try_new(subject: Term, predicate: Term, object: Term) -> Result<Self, TripleError> {
        if subject.is_literal() {
            return Err(TripleError::LiteralSubject(subject.to_string()));
        }
        if !predicate.is_iri() {
            return Err(TripleError::NonIriPredicate(predicate.to_string()));
        }
        Ok(Self {
            subject,
            predicate,
            object,
        })
    }

    /// Panics when the subject is a literal or the predicate is not an IRI.
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        match Self::try_new(subject, predicate, object) {
            Ok(t) => t,
            Err(e) => panic!("invalid triple: {e}"),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
