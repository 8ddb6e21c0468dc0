//! N-Triples and Turtle-subset reader.
//!
//! The Turtle subset accepts `@prefix`/`@base` (and their SPARQL-style
//! `PREFIX`/`BASE` forms), prefixed names, the `a` keyword, object lists,
//! predicate lists, quoted literals with language tags or datatypes, bare
//! numeric and boolean literals, and labelled blank nodes. Collections,
//! anonymous `[]` blank nodes and quoted triples are rejected.

use std::collections::HashMap;
use std::fmt;

use super::store::{Graph, GraphPart};
use super::term::{is_absolute_iri, Literal, Term, Triple};
use crate::vocab::{rdf, xsd};

/// Input syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    NTriples,
    TurtleSubset,
}

impl Format {
    /// Guesses the format from a file extension (`.nt` or `.ttl`).
    pub fn from_path(path: &std::path::Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "nt" => Some(Format::NTriples),
            "ttl" => Some(Format::TurtleSubset),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("relative IRI <{iri}> at {line}:{column} with no base")]
    RelativeIri {
        line: usize,
        column: usize,
        iri: String,
    },
}

/// A non-fatal observation made while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// Parses `text` into a graph tagged [`GraphPart::Data`].
pub fn parse_document(text: &str, format: Format, base: Option<&str>) -> Result<Graph, ParseError> {
    parse_document_with_warnings(text, format, base).map(|(g, _)| g)
}

/// Parses `text`, also returning non-fatal warnings (duplicate statements,
/// literals whose lexical form does not fit their numeric datatype, prefix
/// redefinitions).
pub fn parse_document_with_warnings(
    text: &str,
    format: Format,
    base: Option<&str>,
) -> Result<(Graph, Vec<ParseWarning>), ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        format,
        base: base.map(str::to_owned),
        prefixes: HashMap::new(),
        graph: Graph::new(GraphPart::Data),
        warnings: Vec::new(),
    };
    p.document()?;
    Ok((p.graph, p.warnings))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    format: Format,
    base: Option<String>,
    prefixes: HashMap<String, String>,
    graph: Graph,
    warnings: Vec<ParseWarning>,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(ParseWarning {
            line: self.line,
            column: self.column,
            message: message.into(),
        });
    }

    fn turtle(&self) -> bool {
        self.format == Format::TurtleSubset
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn starts_with_keyword(&self, kw: &str, case_insensitive: bool) -> bool {
        let n = kw.chars().count();
        if self.pos + n > self.chars.len() {
            return false;
        }
        let matches = self.chars[self.pos..self.pos + n]
            .iter()
            .zip(kw.chars())
            .all(|(&a, b)| {
                if case_insensitive {
                    a.eq_ignore_ascii_case(&b)
                } else {
                    a == b
                }
            });
        matches
            && self
                .chars
                .get(self.pos + n)
                .is_none_or(|c| c.is_whitespace() || *c == '<')
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(x) if x == c => {
                self.bump();
                Ok(())
            }
            Some(x) => self.error(format!("expected '{c}', found '{x}'")),
            None => self.error(format!("expected '{c}', found end of input")),
        }
    }

    fn document(&mut self) -> Result<(), ParseError> {
        loop {
            self.skip_ws();
            let Some(c) = self.peek() else {
                return Ok(());
            };
            if self.turtle() {
                if c == '@' {
                    self.directive()?;
                    continue;
                }
                if self.starts_with_keyword("PREFIX", true) {
                    self.sparql_prefix()?;
                    continue;
                }
                if self.starts_with_keyword("BASE", true) {
                    self.sparql_base()?;
                    continue;
                }
            }
            self.triples()?;
            self.expect('.')?;
        }
    }

    fn directive(&mut self) -> Result<(), ParseError> {
        self.bump(); // '@'
        if self.starts_with_keyword("prefix", false) {
            self.pos_advance(6);
            self.prefix_body()?;
        } else if self.starts_with_keyword("base", false) {
            self.pos_advance(4);
            self.skip_ws();
            let iri = self.iriref()?;
            self.base = Some(iri);
        } else {
            return self.error("unknown directive");
        }
        self.expect('.')
    }

    fn sparql_prefix(&mut self) -> Result<(), ParseError> {
        self.pos_advance(6);
        self.prefix_body()
    }

    fn sparql_base(&mut self) -> Result<(), ParseError> {
        self.pos_advance(4);
        self.skip_ws();
        let iri = self.iriref()?;
        self.base = Some(iri);
        Ok(())
    }

    fn pos_advance(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn prefix_body(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                name.push(c);
                self.bump();
            } else {
                return self.error(format!("invalid character '{c}' in prefix name"));
            }
        }
        if name.ends_with('.') {
            return self.error("prefix name cannot end with '.'");
        }
        self.expect(':')?;
        self.skip_ws();
        let iri = self.iriref()?;
        if let Some(old) = self.prefixes.insert(name.clone(), iri.clone()) {
            if old != iri {
                self.warn(format!("prefix '{name}:' redefined"));
            }
        }
        Ok(())
    }

    fn triples(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        let subject = self.subject()?;
        if !self.turtle() {
            self.skip_ws();
            let predicate = self.verb()?;
            self.skip_ws();
            let object = self.object()?;
            self.add(subject, predicate, object);
            return Ok(());
        }
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                self.skip_ws();
                let object = self.object()?;
                self.add(subject.clone(), predicate.clone(), object);
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | None) {
                return Ok(());
            }
        }
    }

    fn add(&mut self, subject: Term, predicate: Term, object: Term) {
        let triple = Triple {
            subject,
            predicate,
            object,
        };
        if !self.graph.insert(triple.clone()) {
            self.warn(format!("duplicate statement {triple}"));
        }
    }

    fn subject(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('<') => Ok(Term::iri(self.iriref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_node(),
            Some('[') => self.error("anonymous blank nodes are not supported"),
            Some('(') => self.error("collections are not supported"),
            Some(_) if self.turtle() => Ok(Term::iri(self.prefixed_name()?)),
            Some(c) => self.error(format!("unexpected '{c}' at start of subject")),
            None => self.error("unexpected end of input, expected subject"),
        }
    }

    fn verb(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('<') => Ok(Term::iri(self.iriref()?)),
            Some('a')
                if self.turtle()
                    && self
                        .peek_at(1)
                        .is_none_or(|c| c.is_whitespace() || c == '<' || c == '"') =>
            {
                self.bump();
                Ok(Term::iri(rdf::TYPE))
            }
            Some('_') => self.error("blank node cannot be a predicate"),
            Some('"') | Some('\'') => self.error("literal cannot be a predicate"),
            Some(_) if self.turtle() => Ok(Term::iri(self.prefixed_name()?)),
            Some(c) => self.error(format!("unexpected '{c}', expected predicate")),
            None => self.error("unexpected end of input, expected predicate"),
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('<') if self.peek_at(1) == Some('<') => {
                self.error("quoted triples are not supported")
            }
            Some('<') => Ok(Term::iri(self.iriref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_node(),
            Some('"') => self.literal(),
            Some('\'') if self.turtle() => self.literal(),
            Some('[') => self.error("anonymous blank nodes are not supported"),
            Some('(') => self.error("collections are not supported"),
            Some(c) if self.turtle() && (c.is_ascii_digit() || matches!(c, '+' | '-' | '.')) => {
                self.numeric()
            }
            Some(_) if self.turtle() && self.starts_with_bool() => self.boolean(),
            Some(_) if self.turtle() => Ok(Term::iri(self.prefixed_name()?)),
            Some(c) => self.error(format!("unexpected '{c}', expected object")),
            None => self.error("unexpected end of input, expected object"),
        }
    }

    fn starts_with_bool(&self) -> bool {
        let delimited = |n: usize| {
            self.peek_at(n)
                .is_none_or(|c| c.is_whitespace() || matches!(c, '.' | ',' | ';' | '#'))
        };
        let word = |w: &str| {
            w.chars()
                .enumerate()
                .all(|(i, c)| self.peek_at(i) == Some(c))
                && delimited(w.len())
        };
        word("true") || word("false")
    }

    fn boolean(&mut self) -> Result<Term, ParseError> {
        let v = if self.peek() == Some('t') {
            "true"
        } else {
            "false"
        };
        self.pos_advance(v.len());
        Ok(Term::typed(v, xsd::BOOLEAN))
    }

    fn numeric(&mut self) -> Result<Term, ParseError> {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            s.push(c);
            self.bump();
        }
        let mut digits_before = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
            digits_before += 1;
        }
        let mut datatype = xsd::INTEGER;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            s.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                s.push(c);
                self.bump();
            }
            datatype = xsd::DECIMAL;
        } else if digits_before == 0 {
            return self.error("malformed numeric literal");
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            s.push(e);
            self.bump();
            if let Some(c @ ('+' | '-')) = self.peek() {
                s.push(c);
                self.bump();
            }
            let mut exp_digits = 0;
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                s.push(c);
                self.bump();
                exp_digits += 1;
            }
            if exp_digits == 0 {
                return self.error("malformed exponent");
            }
            datatype = xsd::DOUBLE;
        }
        Ok(Term::typed(s, datatype))
    }

    fn iriref(&mut self) -> Result<String, ParseError> {
        let (line, column) = (self.line, self.column);
        if self.peek() != Some('<') {
            return self.error("expected '<'");
        }
        self.bump();
        let mut iri = String::new();
        loop {
            match self.bump() {
                None => return self.error("unterminated IRI"),
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => iri.push(self.hex_escape(4)?),
                    Some('U') => iri.push(self.hex_escape(8)?),
                    _ => return self.error("invalid escape in IRI"),
                },
                Some(c)
                    if c.is_whitespace()
                        || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') =>
                {
                    return self.error(format!("invalid character {c:?} in IRI"))
                }
                Some(c) => iri.push(c),
            }
        }
        self.resolve(iri, line, column)
    }

    fn resolve(&self, iri: String, line: usize, column: usize) -> Result<String, ParseError> {
        if is_absolute_iri(&iri) {
            return Ok(iri);
        }
        let relative = || ParseError::RelativeIri {
            line,
            column,
            iri: iri.clone(),
        };
        if !self.turtle() {
            return Err(relative());
        }
        let base = self.base.as_deref().ok_or_else(relative)?;
        let base = url::Url::parse(base).map_err(|_| relative())?;
        base.join(&iri).map(String::from).map_err(|_| relative())
    }

    fn hex_escape(&mut self, n: usize) -> Result<char, ParseError> {
        let mut v = 0u32;
        for _ in 0..n {
            let Some(d) = self.bump().and_then(|c| c.to_digit(16)) else {
                return self.error("invalid hex escape");
            };
            v = v * 16 + d;
        }
        match char::from_u32(v) {
            Some(c) => Ok(c),
            None => self.error(format!("invalid code point U+{v:X}")),
        }
    }

    fn blank_node(&mut self) -> Result<Term, ParseError> {
        self.pos_advance(2);
        let mut label = String::new();
        let name_char = |c: char| c.is_alphanumeric() || matches!(c, '_' | '-');
        while let Some(c) = self.peek() {
            // A dot belongs to the label only when more label follows.
            let dot_inside = c == '.' && self.peek_at(1).is_some_and(|n| name_char(n) || n == '.');
            if !(name_char(c) || dot_inside) {
                break;
            }
            label.push(c);
            self.bump();
        }
        if label.is_empty() {
            return self.error("empty blank node label");
        }
        Ok(Term::blank(label))
    }

    fn prefixed_name(&mut self) -> Result<String, ParseError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                prefix.push(c);
                self.bump();
            } else {
                return self.error(format!("unexpected '{c}'"));
            }
        }
        if self.peek() != Some(':') {
            return self.error(format!("expected prefixed name, found '{prefix}'"));
        }
        self.bump();
        let local_char = |c: char| c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '%');
        let mut local = String::new();
        while let Some(c) = self.peek() {
            if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                    _ => return self.error("invalid local name escape"),
                }
            } else if local_char(c)
                || (c == '.' && self.peek_at(1).is_some_and(|n| local_char(n) || n == '.'))
            {
                local.push(c);
                self.bump();
            } else {
                break;
            }
        }
        let Some(ns) = self.prefixes.get(&prefix) else {
            return self.error(format!("undeclared prefix '{prefix}:'"));
        };
        Ok(format!("{ns}{local}"))
    }

    fn literal(&mut self) -> Result<Term, ParseError> {
        let quote = self.peek().unwrap_or('"');
        let long =
            self.turtle() && self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        let lexical = if long {
            self.pos_advance(3);
            self.string_body(quote, true)?
        } else {
            self.bump();
            self.string_body(quote, false)?
        };
        if self.peek() == Some('@') {
            self.bump();
            let mut tag = String::new();
            while let Some(c) = self.peek() {
                if c.is_ascii_alphanumeric() || (c == '-' && !tag.is_empty()) {
                    tag.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            if tag.is_empty() || !tag.starts_with(|c: char| c.is_ascii_alphabetic()) {
                return self.error("malformed language tag");
            }
            return Ok(Term::Literal(Literal::lang(lexical, tag)));
        }
        if self.peek() == Some('^') {
            self.bump();
            if self.bump() != Some('^') {
                return self.error("expected '^^'");
            }
            let datatype = if self.peek() == Some('<') {
                self.iriref()?
            } else if self.turtle() {
                self.prefixed_name()?
            } else {
                return self.error("expected datatype IRI");
            };
            self.check_lexical(&lexical, &datatype);
            return Ok(Term::typed(lexical, datatype));
        }
        Ok(Term::string(lexical))
    }

    fn check_lexical(&mut self, lexical: &str, datatype: &str) {
        let ok = match datatype {
            xsd::INTEGER => lexical.parse::<i128>().is_ok(),
            xsd::DECIMAL | xsd::DOUBLE => lexical.parse::<f64>().is_ok(),
            xsd::BOOLEAN => matches!(lexical, "true" | "false" | "0" | "1"),
            _ => true,
        };
        if !ok {
            self.warn(format!(
                "lexical form {lexical:?} is not valid for <{datatype}>"
            ));
        }
    }

    fn string_body(&mut self, quote: char, long: bool) -> Result<String, ParseError> {
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return self.error("unterminated string literal"),
                Some(c) if c == quote => {
                    if !long {
                        return Ok(s);
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        self.pos_advance(2);
                        // Quotes directly before the closing delimiter belong to the body.
                        while self.peek() == Some(quote) {
                            s.push(quote);
                            self.bump();
                        }
                        return Ok(s);
                    }
                    s.push(c);
                }
                Some('\n' | '\r') if !long => return self.error("newline in string literal"),
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{08}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{0C}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4)?,
                        Some('U') => self.hex_escape(8)?,
                        _ => return self.error("invalid string escape"),
                    };
                    s.push(c);
                }
                Some(c) => s.push(c),
            }
        }
    }
}
