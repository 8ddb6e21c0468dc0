//! Filters, their tri-state evaluation and the query-string wire format.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{local_name, Graph, Literal, Term};
use crate::occurrence::Occurrence;
use crate::vocab::{rdfs, xsd};

use super::geo::{point_in_polygon, validate_polygon, LatLon};
use super::schema::{ColumnKind, Dimension, Extraction, MeasureSpec, TableSchema};
use super::units::{convert, split_quantity};
use super::ExploreError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WorldAssumption {
    #[default]
    Open,
    Closed,
}

impl FromStr for WorldAssumption {
    type Err = ExploreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "open" => Ok(Self::Open),
            "closed" => Ok(Self::Closed),
            other => Err(ExploreError::InvalidWorld(other.to_owned())),
        }
    }
}

impl fmt::Display for WorldAssumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Open => "open",
            Self::Closed => "closed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FilterOutcome {
    Pass,
    Fail,
    Missing,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Filter {
    NumericRange {
        dimension: String,
        min: Option<f64>,
        max: Option<f64>,
        unit: Option<String>,
    },
    /// Years, both ends inclusive.
    TimeInterval {
        dimension: String,
        start: Option<i64>,
        end: Option<i64>,
    },
    GeoPolygon {
        dimension: String,
        vertices: Vec<LatLon>,
    },
    Category {
        dimension: String,
        allowed: BTreeSet<String>,
    },
    TextContains {
        dimension: String,
        needle: String,
    },
}

impl Filter {
    pub fn dimension(&self) -> &str {
        match self {
            Self::NumericRange { dimension, .. }
            | Self::TimeInterval { dimension, .. }
            | Self::GeoPolygon { dimension, .. }
            | Self::Category { dimension, .. }
            | Self::TextContains { dimension, .. } => dimension,
        }
    }

    /// Checks the value-level invariants of the filter.
    pub fn validate(&self) -> Result<(), ExploreError> {
        let invalid = |why: &str| {
            Err(ExploreError::InvalidFilter(format!(
                "{}: {why}",
                self.dimension()
            )))
        };
        match self {
            Self::NumericRange { min, max, .. } => match (min, max) {
                (None, None) => invalid("range needs a bound"),
                (Some(a), Some(b)) if a > b => invalid("min exceeds max"),
                _ if min.is_some_and(|v| !v.is_finite()) || max.is_some_and(|v| !v.is_finite()) => {
                    invalid("non-finite bound")
                }
                _ => Ok(()),
            },
            Self::TimeInterval { start, end, .. } => match (start, end) {
                (None, None) => invalid("interval needs a bound"),
                (Some(a), Some(b)) if a > b => invalid("start after end"),
                _ => Ok(()),
            },
            Self::GeoPolygon { vertices, .. } => {
                validate_polygon(vertices).map_err(ExploreError::from)
            }
            Self::Category { allowed, .. } if allowed.is_empty() => invalid("empty category set"),
            Self::TextContains { needle, .. } if needle.is_empty() => invalid("empty needle"),
            _ => Ok(()),
        }
    }

    /// Whether this filter can be applied to a dimension of `kind`.
    pub fn accepts(&self, kind: ColumnKind) -> bool {
        use ColumnKind::*;
        match self {
            Self::NumericRange { .. } => matches!(kind, Integer | Decimal),
            Self::TimeInterval { .. } => kind == DateTimeYear,
            Self::GeoPolygon { .. } => kind == GeoPoint,
            Self::Category { .. } | Self::TextContains { .. } => matches!(kind, Category | Text),
        }
    }

    fn op_name(&self) -> &'static str {
        match self {
            Self::NumericRange { .. } | Self::TimeInterval { .. } => "range",
            Self::GeoPolygon { .. } => "within",
            Self::Category { .. } => "in",
            Self::TextContains { .. } => "contains",
        }
    }

    /// The `dim:op:value` wire form.
    pub fn to_wire(&self) -> String {
        fn range<T: fmt::Display>(lo: &Option<T>, hi: &Option<T>, unit: &str) -> String {
            match (lo, hi) {
                (Some(a), Some(b)) => format!("between:{a}{unit}..{b}{unit}"),
                (Some(a), None) => format!("gte:{a}{unit}"),
                (None, Some(b)) => format!("lte:{b}{unit}"),
                (None, None) => "between:..".to_owned(),
            }
        }
        let body = match self {
            Self::NumericRange { min, max, unit, .. } => {
                range(min, max, unit.as_deref().unwrap_or(""))
            }
            Self::TimeInterval { start, end, .. } => range(start, end, ""),
            Self::GeoPolygon { vertices, .. } => {
                let pts: Vec<String> = vertices
                    .iter()
                    .map(|(lat, lon)| format!("{lat} {lon}"))
                    .collect();
                format!("within:{}", pts.join(";"))
            }
            Self::Category { allowed, .. } => {
                format!(
                    "in:{}",
                    allowed.iter().cloned().collect::<Vec<_>>().join("|")
                )
            }
            Self::TextContains { needle, .. } => format!("contains:{needle}"),
        };
        format!("{}:{body}", self.dimension())
    }
}

/// A conjunction of filters plus the world assumption for missing values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FilterSet {
    filters: Vec<Filter>,
    world: WorldAssumption,
}

impl FilterSet {
    pub fn new(filters: Vec<Filter>, world: WorldAssumption) -> Result<Self, ExploreError> {
        let mut seen = BTreeSet::new();
        for f in &filters {
            f.validate()?;
            if !seen.insert(f.dimension().to_owned()) {
                return Err(ExploreError::DuplicateDimension(f.dimension().to_owned()));
            }
        }
        Ok(Self { filters, world })
    }

    pub fn empty(world: WorldAssumption) -> Self {
        Self {
            filters: Vec::new(),
            world,
        }
    }

    pub fn filters(&self) -> &[Filter] {
        &self.filters
    }

    pub fn world(&self) -> WorldAssumption {
        self.world
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    /// The same filters under another world assumption.
    pub fn with_world(&self, world: WorldAssumption) -> Self {
        Self {
            filters: self.filters.clone(),
            world,
        }
    }

    /// Adds a filter, keeping the one-filter-per-dimension invariant.
    pub fn with_filter(&self, filter: Filter) -> Result<Self, ExploreError> {
        let mut filters = self.filters.clone();
        filters.push(filter);
        Self::new(filters, self.world)
    }

    /// Checks every filter's dimension against `schema`.
    pub fn check(&self, schema: &TableSchema) -> Result<(), ExploreError> {
        for f in &self.filters {
            resolve(schema, f)?;
        }
        Ok(())
    }

    /// Comma-joined wire form of the filters (world not included).
    pub fn to_wire(&self) -> String {
        self.filters
            .iter()
            .map(Filter::to_wire)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses `dim:op:value,...` against `schema`. Empty input gives an
    /// empty set. Values are kept verbatim so `contains` needles may carry
    /// spaces.
    pub fn parse(
        text: &str,
        world: WorldAssumption,
        schema: &TableSchema,
    ) -> Result<Self, ExploreError> {
        let filters = text
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| parse_filter(t, schema))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(filters, world)
    }
}

fn resolve(schema: &TableSchema, filter: &Filter) -> Result<Dimension, ExploreError> {
    let dim = schema
        .dimension(filter.dimension())
        .ok_or_else(|| ExploreError::UnknownDimension(filter.dimension().to_owned()))?;
    if !filter.accepts(dim.kind) {
        return Err(ExploreError::KindMismatch {
            dimension: dim.key,
            operator: filter.op_name().to_owned(),
        });
    }
    Ok(dim)
}

/// Parses one `dim:op:value` token.
pub fn parse_filter(token: &str, schema: &TableSchema) -> Result<Filter, ExploreError> {
    let mut parts = token.splitn(3, ':');
    let (Some(dim), Some(op), Some(value)) = (parts.next(), parts.next(), parts.next()) else {
        return Err(ExploreError::MalformedFilter(token.to_owned()));
    };
    let (dim, op) = (dim.trim(), op.trim());
    let dimension = schema
        .dimension(dim)
        .ok_or_else(|| ExploreError::UnknownDimension(dim.to_owned()))?;
    let bad_value = || ExploreError::InvalidValue {
        dimension: dim.to_owned(),
        value: value.to_owned(),
    };
    let filter = match op {
        "gte" | "lte" | "between" => {
            let (lo, hi) = match op {
                "gte" => (Some(value), None),
                "lte" => (None, Some(value)),
                _ => {
                    let (a, b) = value.split_once("..").ok_or_else(bad_value)?;
                    (
                        (!a.trim().is_empty()).then_some(a),
                        (!b.trim().is_empty()).then_some(b),
                    )
                }
            };
            match dimension.kind {
                ColumnKind::DateTimeYear => {
                    let year = |s: Option<&str>| {
                        s.map(|s| s.trim().parse::<i64>().map_err(|_| bad_value()))
                            .transpose()
                    };
                    Filter::TimeInterval {
                        dimension: dim.to_owned(),
                        start: year(lo)?,
                        end: year(hi)?,
                    }
                }
                ColumnKind::Integer | ColumnKind::Decimal => {
                    let lo = lo
                        .map(|s| split_quantity(s).ok_or_else(bad_value))
                        .transpose()?;
                    let hi = hi
                        .map(|s| split_quantity(s).ok_or_else(bad_value))
                        .transpose()?;
                    let unit = lo.and_then(|(_, u)| u).or(hi.and_then(|(_, u)| u));
                    let to_unit =
                        |x: Option<(f64, Option<&str>)>| -> Result<Option<f64>, ExploreError> {
                            x.map(|(v, u)| match (u, unit) {
                                (Some(from), Some(to)) => {
                                    convert(v, from, to).ok_or_else(bad_value)
                                }
                                _ => Ok(v),
                            })
                            .transpose()
                        };
                    Filter::NumericRange {
                        dimension: dim.to_owned(),
                        min: to_unit(lo)?,
                        max: to_unit(hi)?,
                        unit: unit.map(str::to_owned),
                    }
                }
                _ => {
                    return Err(ExploreError::KindMismatch {
                        dimension: dim.to_owned(),
                        operator: op.to_owned(),
                    })
                }
            }
        }
        "in" => Filter::Category {
            dimension: dim.to_owned(),
            allowed: value
                .split('|')
                .map(|v| v.trim().to_owned())
                .filter(|v| !v.is_empty())
                .collect(),
        },
        "contains" => Filter::TextContains {
            dimension: dim.to_owned(),
            needle: value.to_owned(),
        },
        "within" => {
            let vertices = value
                .split(';')
                .map(|pair| {
                    let mut it = pair.split_whitespace().map(str::parse::<f64>);
                    match (it.next(), it.next(), it.next()) {
                        (Some(Ok(lat)), Some(Ok(lon)), None) => Ok((lat, lon)),
                        _ => Err(bad_value()),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            Filter::GeoPolygon {
                dimension: dim.to_owned(),
                vertices,
            }
        }
        other => return Err(ExploreError::UnknownOperator(other.to_owned())),
    };
    resolve(schema, &filter)?;
    filter.validate()?;
    Ok(filter)
}

/// Parses a numeric literal typed `xsd:integer`, `xsd:decimal` or `xsd:double`.
pub fn parse_number(term: &Term) -> Option<f64> {
    let lit = term.as_literal()?;
    if ![xsd::INTEGER, xsd::DECIMAL, xsd::DOUBLE].contains(&lit.datatype.as_str()) {
        return None;
    }
    lit.lexical
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
}

/// Year of an `xsd:gYear` or `xsd:dateTime` literal.
pub fn parse_year(term: &Term) -> Option<i64> {
    let lit = term.as_literal()?;
    let text = lit.lexical.trim();
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let end = digits
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(digits.len());
    if end < 4 {
        return None;
    }
    let rest = &digits[end..];
    let well_formed = match lit.datatype.as_str() {
        xsd::G_YEAR => rest.is_empty() || rest == "Z" || rest.starts_with(['+', '-']),
        xsd::DATE_TIME => rest.starts_with('-') && rest.contains('T'),
        _ => false,
    };
    if !well_formed {
        return None;
    }
    let year: i64 = digits[..end].parse().ok()?;
    Some(if negative { -year } else { year })
}

/// Names a term can be matched by: its labels, local name and full IRI,
/// or the lexical form for literals.
pub fn term_names(term: &Term, data: &Graph) -> Vec<String> {
    match term {
        Term::Literal(l) => vec![l.lexical.clone()],
        other => {
            let mut names: Vec<String> = data
                .objects(other, rdfs::LABEL)
                .into_iter()
                .filter_map(|t| t.as_literal().map(|l| l.lexical.clone()))
                .collect();
            names.push(local_name(other.value()).to_owned());
            names.push(other.value().to_owned());
            names
        }
    }
}

/// Display form of a term: literals as-is, resources by label or local name.
pub fn display_literal(term: &Term, data: &Graph) -> Literal {
    match term {
        Term::Literal(l) => l.clone(),
        other => data
            .objects(other, rdfs::LABEL)
            .into_iter()
            .find_map(|t| t.as_literal().cloned())
            .unwrap_or_else(|| Literal::simple(local_name(other.value()))),
    }
}

/// One measure of the requested type: its value term and unit text.
pub(crate) fn measures_of(
    spec: &MeasureSpec,
    anchor: &Term,
    data: &Graph,
) -> Vec<(Term, Option<String>)> {
    let layout = &spec.layout;
    let mut out = Vec::new();
    for m in layout.members.values(anchor, data) {
        let typed = data.objects(&m, &layout.type_predicate).iter().any(|t| {
            term_names(t, data)
                .iter()
                .any(|n| n.eq_ignore_ascii_case(&spec.measure_type))
        });
        if !typed {
            continue;
        }
        let unit = data
            .first_object(&m, &layout.unit_predicate)
            .map(|u| match &u {
                Term::Literal(l) => l.lexical.clone(),
                other => local_name(other.value()).to_owned(),
            });
        for v in data.objects(&m, &layout.value_predicate) {
            out.push((v, unit.clone()));
        }
    }
    out
}

fn warn_unparsable(dimension: &str, term: &Term) {
    log::warn!(
        "{}",
        ExploreError::UnparsableLiteral {
            dimension: dimension.to_owned(),
            lexical: term.to_string(),
        }
    );
}

/// Folds per-value verdicts: `None` marks an unparsable value.
fn fold(verdicts: impl IntoIterator<Item = Option<bool>>) -> FilterOutcome {
    let mut outcome = FilterOutcome::Missing;
    for v in verdicts.into_iter().flatten() {
        if v {
            return FilterOutcome::Pass;
        }
        outcome = FilterOutcome::Fail;
    }
    outcome
}

fn anchor_of(occurrence: &Occurrence) -> Result<&Term, ExploreError> {
    occurrence
        .anchor
        .as_ref()
        .ok_or_else(|| ExploreError::MissingAnchor(occurrence.instance.clone()))
}

/// Evaluates one filter on one occurrence: Pass if some value satisfies
/// it, Fail if values exist and none does, Missing if no value parses.
pub fn eval_filter(
    schema: &TableSchema,
    filter: &Filter,
    occurrence: &Occurrence,
    data: &Graph,
) -> Result<FilterOutcome, ExploreError> {
    let dim = resolve(schema, filter)?;
    let anchor = anchor_of(occurrence)?;
    let key = dim.key.as_str();
    let numbers = |terms: Vec<Term>| -> Vec<Option<f64>> {
        terms
            .iter()
            .map(|t| {
                let n = parse_number(t);
                if n.is_none() {
                    warn_unparsable(key, t);
                }
                n
            })
            .collect()
    };
    let years = |terms: Vec<Term>| -> Vec<Option<i64>> {
        terms
            .iter()
            .map(|t| {
                let y = parse_year(t);
                if y.is_none() {
                    warn_unparsable(key, t);
                }
                y
            })
            .collect()
    };
    let outcome = match (filter, &dim.extraction) {
        (Filter::NumericRange { min, max, unit, .. }, ex) => {
            let in_range = |v: f64| min.is_none_or(|m| v >= m) && max.is_none_or(|m| v <= m);
            match ex {
                Extraction::Count(path) => {
                    fold([Some(in_range(path.values(anchor, data).len() as f64))])
                }
                Extraction::Value(path) => fold(
                    numbers(path.values(anchor, data))
                        .into_iter()
                        .map(|v| v.map(in_range)),
                ),
                Extraction::Measure(spec) => fold(measures_of(spec, anchor, data).into_iter().map(
                    |(term, from)| {
                        let v = parse_number(&term).and_then(|v| {
                            match (from.as_deref(), unit.as_deref()) {
                                (Some(from), Some(to)) => convert(v, from, to),
                                _ => Some(v),
                            }
                        });
                        if v.is_none() {
                            warn_unparsable(key, &term);
                        }
                        v.map(in_range)
                    },
                )),
                _ => FilterOutcome::Missing,
            }
        }
        (Filter::TimeInterval { start, end, .. }, ex) => {
            let lo = start.unwrap_or(i64::MIN);
            let hi = end.unwrap_or(i64::MAX);
            match ex {
                Extraction::Value(path) => fold(
                    years(path.values(anchor, data))
                        .into_iter()
                        .map(|y| y.map(|y| lo <= y && y <= hi)),
                ),
                Extraction::Interval { start: s, end: e } => {
                    let s = years(s.values(anchor, data)).into_iter().flatten().min();
                    let e = years(e.values(anchor, data)).into_iter().flatten().max();
                    if s.is_none() && e.is_none() {
                        FilterOutcome::Missing
                    } else {
                        let s = s.unwrap_or(i64::MIN);
                        let e = e.unwrap_or(i64::MAX);
                        fold([Some(s <= hi && e >= lo)])
                    }
                }
                _ => FilterOutcome::Missing,
            }
        }
        (Filter::GeoPolygon { vertices, .. }, Extraction::Point { lat, lon }) => {
            let lats: Vec<f64> = numbers(lat.values(anchor, data))
                .into_iter()
                .flatten()
                .collect();
            let lons: Vec<f64> = numbers(lon.values(anchor, data))
                .into_iter()
                .flatten()
                .collect();
            fold(
                lats.iter()
                    .flat_map(|&a| lons.iter().map(move |&o| (a, o)))
                    .map(|p| point_in_polygon(p, vertices).ok()),
            )
        }
        (Filter::Category { allowed, .. }, Extraction::Value(path)) => fold(
            path.values(anchor, data)
                .iter()
                .map(|t| Some(term_names(t, data).iter().any(|n| allowed.contains(n)))),
        ),
        (Filter::TextContains { needle, .. }, Extraction::Value(path)) => {
            let needle = needle.to_lowercase();
            fold(path.values(anchor, data).iter().map(|t| {
                let names = match t {
                    Term::Literal(l) => vec![l.lexical.clone()],
                    other => {
                        let mut n = term_names(other, data);
                        n.pop();
                        n
                    }
                };
                Some(names.iter().any(|n| n.to_lowercase().contains(&needle)))
            }))
        }
        _ => FilterOutcome::Missing,
    };
    Ok(outcome)
}
