//! Projection of occurrences into table rows, with filtering and paging.

use serde::Serialize;

use crate::graph::{Graph, Literal, Term};
use crate::occurrence::Occurrence;
use crate::vocab::{geo, xsd};

use super::filter::{
    display_literal, eval_filter, measures_of, parse_number, FilterOutcome, FilterSet,
    WorldAssumption,
};
use super::schema::{Dimension, Extraction, TableSchema};
use super::ExploreError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub instance: String,
    pub cells: Vec<Option<Literal>>,
}

/// One page of a filtered table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub rows: Vec<TableRow>,
    pub total: usize,
}

/// The tri-state exclusion rule.
pub fn excluded(outcomes: &[FilterOutcome], world: WorldAssumption) -> bool {
    outcomes.contains(&FilterOutcome::Fail)
        || (world == WorldAssumption::Closed && outcomes.contains(&FilterOutcome::Missing))
}

fn cell(dim: &Dimension, anchor: &Term, data: &Graph) -> Option<Literal> {
    match &dim.extraction {
        Extraction::Value(path) => path
            .values(anchor, data)
            .first()
            .map(|t| display_literal(t, data)),
        Extraction::Count(path) => Some(Literal::typed(
            path.values(anchor, data).len().to_string(),
            xsd::INTEGER,
        )),
        Extraction::Point { lat, lon } => {
            let lat = lat.values(anchor, data).iter().find_map(parse_number)?;
            let lon = lon.values(anchor, data).iter().find_map(parse_number)?;
            Some(Literal::typed(
                format!("POINT({lon} {lat})"),
                geo::WKT_LITERAL,
            ))
        }
        Extraction::Interval { start, end } => {
            let s = start
                .values(anchor, data)
                .first()
                .map(|t| display_literal(t, data).lexical);
            let e = end
                .values(anchor, data)
                .first()
                .map(|t| display_literal(t, data).lexical);
            if s.is_none() && e.is_none() {
                return None;
            }
            Some(Literal::simple(format!(
                "{}..{}",
                s.unwrap_or_default(),
                e.unwrap_or_default()
            )))
        }
        Extraction::Measure(spec) => measures_of(spec, anchor, data)
            .first()
            .map(|(t, _)| display_literal(t, data)),
    }
}

/// Maps an occurrence to its row, or `None` when the filters exclude it.
pub fn emap(
    schema: &TableSchema,
    occurrence: &Occurrence,
    data: &Graph,
    filters: &FilterSet,
) -> Result<Option<TableRow>, ExploreError> {
    if occurrence.pattern != schema.pattern {
        return Err(ExploreError::SchemaMismatch {
            pattern: schema.pattern.clone(),
            found: occurrence.pattern.clone(),
        });
    }
    let outcomes = filters
        .filters()
        .iter()
        .map(|f| eval_filter(schema, f, occurrence, data))
        .collect::<Result<Vec<_>, _>>()?;
    if excluded(&outcomes, filters.world()) {
        return Ok(None);
    }
    let anchor = occurrence
        .anchor
        .as_ref()
        .ok_or_else(|| ExploreError::MissingAnchor(occurrence.instance.clone()))?;
    Ok(Some(TableRow {
        instance: occurrence.instance.clone(),
        cells: schema
            .columns
            .iter()
            .map(|d| cell(d, anchor, data))
            .collect(),
    }))
}

/// Filters, sorts by instance IRI and slices `[offset, offset + limit)`.
pub fn build_table<'a>(
    schema: &TableSchema,
    occurrences: impl IntoIterator<Item = &'a Occurrence>,
    data: &Graph,
    filters: &FilterSet,
    offset: usize,
    limit: usize,
) -> Result<Table, ExploreError> {
    if limit == 0 {
        return Err(ExploreError::InvalidPage);
    }
    filters.check(schema)?;
    let mut rows = Vec::new();
    for occ in occurrences {
        if let Some(row) = emap(schema, occ, data, filters)? {
            rows.push(row);
        }
    }
    rows.sort_by(|a, b| a.instance.cmp(&b.instance));
    let total = rows.len();
    let rows = rows.into_iter().skip(offset).take(limit).collect();
    Ok(Table { rows, total })
}
