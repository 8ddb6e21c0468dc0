//! The exploration level: per-pattern tables, filters with an open or
//! closed world assumption, and pagination.

mod filter;
mod geo;
mod schema;
mod table;
mod units;

pub use filter::{
    display_literal, eval_filter, parse_filter, parse_number, parse_year, term_names, Filter,
    FilterOutcome, FilterSet, WorldAssumption,
};
pub use geo::{point_in_polygon, validate_polygon, GeoError, LatLon};
pub use schema::{
    table_schema, ColumnInfo, ColumnKind, Dimension, Extraction, MeasureLayout, MeasureSpec,
    SchemaRegistry, TableSchema, ValuePath, ANCHOR_VAR, VALUE_VAR,
};
pub use table::{build_table, emap, excluded, Table, TableRow};
pub use units::{convert as convert_unit, split_quantity};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExploreError {
    #[error("no table schema for pattern {0}")]
    UnknownPattern(String),
    #[error("occurrence of {found} given to the schema of {pattern}")]
    SchemaMismatch { pattern: String, found: String },
    #[error("occurrence {0} has no anchor")]
    MissingAnchor(String),
    #[error("unknown dimension {0:?}")]
    UnknownDimension(String),
    #[error("unknown filter operator {0:?}")]
    UnknownOperator(String),
    #[error("filter {0:?} is not of the form dim:op:value")]
    MalformedFilter(String),
    #[error("operator {operator} does not apply to dimension {dimension}")]
    KindMismatch { dimension: String, operator: String },
    #[error("invalid value {value:?} for dimension {dimension}")]
    InvalidValue { dimension: String, value: String },
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("more than one filter on dimension {0}")]
    DuplicateDimension(String),
    #[error("world must be open or closed, got {0:?}")]
    InvalidWorld(String),
    #[error("page limit must be at least 1")]
    InvalidPage,
    #[error("unparsable value {lexical} for dimension {dimension}")]
    UnparsableLiteral { dimension: String, lexical: String },
    #[error(transparent)]
    Geo(#[from] GeoError),
}

impl ExploreError {
    /// Machine-readable code; request errors carry the offending token.
    pub fn code(&self) -> String {
        match self {
            Self::UnknownPattern(p) => format!("unknown_pattern:{p}"),
            Self::SchemaMismatch { .. } => "schema_mismatch".into(),
            Self::MissingAnchor(_) => "missing_anchor".into(),
            Self::UnknownDimension(d) => format!("unknown_dimension:{d}"),
            Self::UnknownOperator(op) => format!("unknown_operator:{op}"),
            Self::MalformedFilter(t) => format!("malformed_filter:{t}"),
            Self::KindMismatch { dimension, .. } => format!("kind_mismatch:{dimension}"),
            Self::InvalidValue { value, .. } => format!("invalid_value:{value}"),
            Self::InvalidFilter(_) => "invalid_filter".into(),
            Self::DuplicateDimension(d) => format!("duplicate_dimension:{d}"),
            Self::InvalidWorld(w) => format!("invalid_world:{w}"),
            Self::InvalidPage => "invalid_page".into(),
            Self::UnparsableLiteral { lexical, .. } => format!("unparsable_literal:{lexical}"),
            Self::Geo(_) => "invalid_polygon".into(),
        }
    }
}
