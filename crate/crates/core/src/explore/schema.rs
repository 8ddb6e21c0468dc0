//! Per-pattern table schemas: columns, extra filter dimensions, and how to
//! extract each dimension's values starting from an occurrence anchor.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{extend_solutions, Graph, Solution, Term, TermPattern, TriplePattern, Variable};
use crate::heritage::{pattern, prop};
use crate::vocab::rdfs;

use super::ExploreError;

/// Variable bound to the occurrence anchor in every value path.
pub const ANCHOR_VAR: &str = "anchor";
/// Variable a value path binds to the extracted value.
pub const VALUE_VAR: &str = "value";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ColumnKind {
    Text,
    Integer,
    Decimal,
    DateTimeYear,
    GeoPoint,
    Category,
}

/// Triple patterns leading from `?anchor` to `?value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuePath {
    pub patterns: Vec<TriplePattern>,
}

impl ValuePath {
    pub fn new(patterns: Vec<TriplePattern>) -> Self {
        Self { patterns }
    }

    /// Single hop `?anchor <predicate> ?value`.
    pub fn direct(predicate: &str) -> Self {
        Self::new(vec![TriplePattern::new(
            TermPattern::var(ANCHOR_VAR),
            TermPattern::iri(predicate),
            TermPattern::var(VALUE_VAR),
        )])
    }

    /// Distinct `?value` bindings reachable from `anchor`.
    pub fn values(&self, anchor: &Term, data: &Graph) -> Vec<Term> {
        let seed = Solution::from([(Variable::new(ANCHOR_VAR), anchor.clone())]);
        let value = Variable::new(VALUE_VAR);
        let mut out: Vec<Term> = extend_solutions(data, &self.patterns, vec![seed], None)
            .into_iter()
            .filter_map(|mut s| s.remove(&value))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Helper for building paths with the `?anchor`/`?value` convention.
fn tp(s: &str, p: &str, o: &str) -> TriplePattern {
    let pos = |x: &str| match x.strip_prefix('?') {
        Some(v) => TermPattern::var(v),
        None => TermPattern::iri(x),
    };
    TriplePattern::new(pos(s), pos(p), pos(o))
}

/// How a dimension's values are obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extraction {
    /// The terms at the end of a path.
    Value(ValuePath),
    /// The number of distinct terms at the end of a path (never missing).
    Count(ValuePath),
    /// A coordinate pair from two paths.
    Point { lat: ValuePath, lon: ValuePath },
    /// A time span; either end may be absent and is then unbounded.
    Interval { start: ValuePath, end: ValuePath },
    /// Measures of one type inside a collection.
    Measure(MeasureSpec),
}

/// Where a collection keeps typed, unit-bearing measures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureLayout {
    pub members: ValuePath,
    pub type_predicate: String,
    pub value_predicate: String,
    pub unit_predicate: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureSpec {
    pub layout: MeasureLayout,
    pub measure_type: String,
}

/// A column or filter-only dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimension {
    pub key: String,
    pub name: String,
    pub kind: ColumnKind,
    pub extraction: Extraction,
}

impl Dimension {
    pub fn new(key: &str, name: &str, kind: ColumnKind, extraction: Extraction) -> Self {
        Self {
            key: key.to_owned(),
            name: name.to_owned(),
            kind,
            extraction,
        }
    }
}

/// Table layout and filterable dimensions for one pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSchema {
    pub pattern: String,
    pub columns: Vec<Dimension>,
    /// Dimensions that can be filtered on but are not shown as columns.
    pub extra_dimensions: Vec<Dimension>,
    /// When set, any unknown dimension name is read as a measure type.
    pub measures: Option<MeasureLayout>,
}

/// Column description as exposed over the API.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnInfo {
    pub key: String,
    pub name: String,
    pub kind: ColumnKind,
}

impl TableSchema {
    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn column_info(&self) -> Vec<ColumnInfo> {
        self.columns
            .iter()
            .map(|d| ColumnInfo {
                key: d.key.clone(),
                name: d.name.clone(),
                kind: d.kind,
            })
            .collect()
    }

    /// Resolves a dimension by key: columns first, then extra dimensions,
    /// then (for measure-bearing schemas) a measure of that type.
    pub fn dimension(&self, key: &str) -> Option<Dimension> {
        if let Some(d) = self
            .columns
            .iter()
            .chain(&self.extra_dimensions)
            .find(|d| d.key == key)
        {
            return Some(d.clone());
        }
        let layout = self.measures.as_ref()?;
        if key.is_empty()
            || !key
                .chars()
                .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | ' '))
        {
            return None;
        }
        Some(Dimension::new(
            key,
            key,
            ColumnKind::Decimal,
            Extraction::Measure(MeasureSpec {
                layout: layout.clone(),
                measure_type: key.to_owned(),
            }),
        ))
    }
}

/// Known schemas keyed by pattern IRI.
#[derive(Debug, Clone, Default)]
pub struct SchemaRegistry {
    schemas: BTreeMap<String, TableSchema>,
}

impl SchemaRegistry {
    /// Schemas for the built-in heritage patterns.
    pub fn builtin() -> Self {
        let mut r = Self::default();
        for p in [pattern::PART_OF, pattern::COMPONENT_OF] {
            r.register(part_of_schema(p));
        }
        r.register(timed_location_schema());
        r.register(measurement_collection_schema());
        r
    }

    pub fn register(&mut self, schema: TableSchema) {
        self.schemas.insert(schema.pattern.clone(), schema);
    }

    pub fn get(&self, pattern: &str) -> Option<&TableSchema> {
        self.schemas.get(pattern)
    }

    pub fn patterns(&self) -> impl Iterator<Item = &str> {
        self.schemas.keys().map(String::as_str)
    }
}

/// Looks up the schema for `pattern`.
pub fn table_schema<'a>(
    registry: &'a SchemaRegistry,
    pattern: &str,
) -> Result<&'a TableSchema, ExploreError> {
    registry
        .get(pattern)
        .ok_or_else(|| ExploreError::UnknownPattern(pattern.to_owned()))
}

fn part_of_schema(pattern_iri: &str) -> TableSchema {
    TableSchema {
        pattern: pattern_iri.to_owned(),
        columns: vec![
            Dimension::new(
                "label",
                "object label",
                ColumnKind::Text,
                Extraction::Value(ValuePath::direct(rdfs::LABEL)),
            ),
            Dimension::new(
                "components",
                "number of parts",
                ColumnKind::Integer,
                Extraction::Count(ValuePath::direct(prop::HAS_PART)),
            ),
        ],
        extra_dimensions: vec![],
        measures: None,
    }
}

fn timed_location_schema() -> TableSchema {
    let owner = |p: &str| {
        ValuePath::new(vec![
            tp("?owner", prop::HAS_TIME_INDEXED_TYPED_LOCATION, "?anchor"),
            tp("?owner", p, "?value"),
        ])
    };
    let place = |p: &str| {
        ValuePath::new(vec![
            tp("?anchor", prop::AT_LOCATION, "?place"),
            tp("?place", p, "?value"),
        ])
    };
    let time = |p: &str| {
        ValuePath::new(vec![
            tp("?anchor", prop::AT_TIME, "?time"),
            tp("?time", p, "?value"),
        ])
    };
    TableSchema {
        pattern: pattern::TIME_INDEXED_TYPED_LOCATION.to_owned(),
        columns: vec![
            Dimension::new(
                "label",
                "property label",
                ColumnKind::Text,
                Extraction::Value(owner(rdfs::LABEL)),
            ),
            Dimension::new(
                "loctype",
                "location type",
                ColumnKind::Category,
                Extraction::Value(ValuePath::direct(prop::HAS_LOCATION_TYPE)),
            ),
            Dimension::new(
                "place",
                "place label",
                ColumnKind::Text,
                Extraction::Value(place(rdfs::LABEL)),
            ),
            Dimension::new(
                "start",
                "start time",
                ColumnKind::DateTimeYear,
                Extraction::Value(time(prop::START_TIME)),
            ),
            Dimension::new(
                "end",
                "end time",
                ColumnKind::DateTimeYear,
                Extraction::Value(time(prop::END_TIME)),
            ),
            Dimension::new(
                "coords",
                "coordinates",
                ColumnKind::GeoPoint,
                Extraction::Point {
                    lat: place(prop::LAT),
                    lon: place(prop::LONG),
                },
            ),
        ],
        extra_dimensions: vec![
            Dimension::new(
                "time",
                "time span",
                ColumnKind::DateTimeYear,
                Extraction::Interval {
                    start: time(prop::START_TIME),
                    end: time(prop::END_TIME),
                },
            ),
            Dimension::new(
                "author",
                "author",
                ColumnKind::Text,
                Extraction::Value(owner(prop::AUTHOR)),
            ),
        ],
        measures: None,
    }
}

fn measurement_collection_schema() -> TableSchema {
    let owner_label = ValuePath::new(vec![
        tp("?owner", prop::HAS_MEASUREMENT_COLLECTION, "?anchor"),
        tp("?owner", rdfs::LABEL, "?value"),
    ]);
    TableSchema {
        pattern: pattern::MEASUREMENT_COLLECTION.to_owned(),
        columns: vec![
            Dimension::new(
                "label",
                "property label",
                ColumnKind::Text,
                Extraction::Value(owner_label),
            ),
            Dimension::new(
                "measures",
                "measure count",
                ColumnKind::Integer,
                Extraction::Count(ValuePath::direct(prop::HAS_MEMBER)),
            ),
        ],
        extra_dimensions: vec![],
        measures: Some(MeasureLayout {
            members: ValuePath::direct(prop::HAS_MEMBER),
            type_predicate: prop::MEASUREMENT_TYPE.to_owned(),
            value_predicate: prop::VALUE.to_owned(),
            unit_predicate: prop::UNIT.to_owned(),
        }),
    }
}
