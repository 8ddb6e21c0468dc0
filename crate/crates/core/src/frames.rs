//! The visualization level: one frame per pattern instance and the
//! per-resource mosaic of frames and property values.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::explore::{display_literal, parse_number, parse_year};
use crate::graph::{local_name, Graph, Term};
use crate::heritage::{pattern, prop};
use crate::occurrence::{occurrence_for_instance, Occurrence, OccurrenceError};
use crate::vocab::{foaf, opla, rdfs};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrameError {
    #[error("no frame builder for pattern {0}")]
    UnsupportedPattern(String),
    #[error("malformed occurrence {instance}: {reason}")]
    MalformedOccurrence { instance: String, reason: String },
    #[error(transparent)]
    Occurrence(#[from] OccurrenceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledNode {
    pub iri: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepictedNode {
    pub iri: String,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depiction: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartOfFrame {
    pub whole: DepictedNode,
    pub parts: Vec<DepictedNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measure {
    #[serde(rename = "type")]
    pub measure_type: String,
    pub value: f64,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementFrame {
    pub subject: LabeledNode,
    pub collection: String,
    pub measures: Vec<Measure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LocationEntry {
    pub location_type: String,
    pub place: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimedLocationFrame {
    pub subject: LabeledNode,
    pub entries: Vec<LocationEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "frameType", rename_all = "camelCase")]
pub enum Frame {
    PartOf(PartOfFrame),
    MeasurementCollection(MeasurementFrame),
    TimedLocation(TimedLocationFrame),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisualFrame {
    pub pattern: String,
    pub instance: String,
    #[serde(flatten)]
    pub frame: Frame,
    pub warnings: Vec<String>,
}

/// Predicates a measurement-collection frame reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementProfile {
    pub owner: String,
    pub member: String,
    pub measure_type: String,
    pub value: String,
    pub unit: String,
}

impl Default for MeasurementProfile {
    fn default() -> Self {
        Self {
            owner: prop::HAS_MEASUREMENT_COLLECTION.into(),
            member: prop::HAS_MEMBER.into(),
            measure_type: prop::MEASUREMENT_TYPE.into(),
            value: prop::VALUE.into(),
            unit: prop::UNIT.into(),
        }
    }
}

/// Predicates a timed-location frame reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedLocationProfile {
    pub owner: String,
    pub location_type: String,
    pub at_location: String,
    pub at_time: String,
    pub start: String,
    pub end: String,
    pub lat: String,
    pub lon: String,
}

impl Default for TimedLocationProfile {
    fn default() -> Self {
        Self {
            owner: prop::HAS_TIME_INDEXED_TYPED_LOCATION.into(),
            location_type: prop::HAS_LOCATION_TYPE.into(),
            at_location: prop::AT_LOCATION.into(),
            at_time: prop::AT_TIME.into(),
            start: prop::START_TIME.into(),
            end: prop::END_TIME.into(),
            lat: prop::LAT.into(),
            lon: prop::LONG.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameBuilder {
    PartOf,
    MeasurementCollection(MeasurementProfile),
    TimedLocation(TimedLocationProfile),
}

/// Frame builders keyed by pattern IRI.
#[derive(Debug, Clone, Default)]
pub struct FrameRegistry {
    builders: BTreeMap<String, FrameBuilder>,
}

impl FrameRegistry {
    pub fn builtin() -> Self {
        let mut r = Self::default();
        r.register(pattern::PART_OF, FrameBuilder::PartOf);
        r.register(pattern::COMPONENT_OF, FrameBuilder::PartOf);
        r.register(
            pattern::MEASUREMENT_COLLECTION,
            FrameBuilder::MeasurementCollection(MeasurementProfile::default()),
        );
        r.register(
            pattern::TIME_INDEXED_TYPED_LOCATION,
            FrameBuilder::TimedLocation(TimedLocationProfile::default()),
        );
        r
    }

    pub fn register(&mut self, pattern: &str, builder: FrameBuilder) {
        self.builders.insert(pattern.to_owned(), builder);
    }

    pub fn get(&self, pattern: &str) -> Option<&FrameBuilder> {
        self.builders.get(pattern)
    }

    pub fn supports(&self, pattern: &str) -> bool {
        self.builders.contains_key(pattern)
    }
}

fn label(term: &Term, data: &Graph) -> String {
    display_literal(term, data).lexical
}

fn labeled(term: &Term, data: &Graph) -> LabeledNode {
    LabeledNode {
        iri: term.value().to_owned(),
        label: label(term, data),
    }
}

fn depicted(term: &Term, data: &Graph) -> DepictedNode {
    DepictedNode {
        iri: term.value().to_owned(),
        label: label(term, data),
        depiction: data
            .objects(term, foaf::DEPICTION)
            .into_iter()
            .find(Term::is_iri)
            .map(|t| t.value().to_owned()),
    }
}

fn malformed(occ: &Occurrence, reason: &str) -> FrameError {
    FrameError::MalformedOccurrence {
        instance: occ.instance.clone(),
        reason: reason.to_owned(),
    }
}

/// The anchor, or else the single member with outgoing but no incoming
/// edges inside the occurrence.
fn structural_root(occ: &Occurrence) -> Option<Term> {
    if let Some(a) = &occ.anchor {
        return Some(a.clone());
    }
    let targets: BTreeSet<&Term> = occ.triples.iter().map(|t| &t.object).collect();
    let roots: Vec<&Term> = occ
        .members
        .iter()
        .filter(|m| !targets.contains(m) && occ.triples.iter().any(|t| &t.subject == *m))
        .collect();
    match roots.as_slice() {
        [one] => Some((*one).clone()),
        _ => None,
    }
}

/// Whole and parts with labels and depictions.
pub fn frame_part_of(occurrence: &Occurrence, data: &Graph) -> Result<PartOfFrame, FrameError> {
    let whole = structural_root(occurrence)
        .ok_or_else(|| malformed(occurrence, "no anchor identifiable"))?;
    let parts: Vec<DepictedNode> = occurrence
        .members
        .iter()
        .filter(|m| **m != whole)
        .map(|m| depicted(m, data))
        .collect();
    if parts.is_empty() {
        return Err(malformed(occurrence, "no parts"));
    }
    Ok(PartOfFrame {
        whole: depicted(&whole, data),
        parts,
    })
}

fn owner_of(occurrence: &Occurrence, node: &Term, predicate: &str, data: &Graph) -> Option<Term> {
    data.subjects(predicate, node)
        .into_iter()
        .find(|s| occurrence.members.contains(s))
}

/// Parsed measures of the collection, sorted by type then value.
pub fn frame_measurement_collection(
    occurrence: &Occurrence,
    data: &Graph,
    profile: &MeasurementProfile,
    warnings: &mut Vec<String>,
) -> Result<MeasurementFrame, FrameError> {
    let members = &occurrence.members;
    let collection = occurrence
        .anchor
        .clone()
        .or_else(|| {
            members
                .iter()
                .find(|m| owner_of(occurrence, m, &profile.owner, data).is_some())
                .cloned()
        })
        .or_else(|| {
            members
                .iter()
                .find(|m| !data.objects(m, &profile.member).is_empty())
                .cloned()
        })
        .ok_or_else(|| malformed(occurrence, "no collection identifiable"))?;
    let subject = owner_of(occurrence, &collection, &profile.owner, data)
        .unwrap_or_else(|| collection.clone());
    let mut measures = Vec::new();
    for m in data.objects(&collection, &profile.member) {
        if !members.contains(&m) {
            continue;
        }
        let measure_type = data
            .first_object(&m, &profile.measure_type)
            .map(|t| label(&t, data))
            .unwrap_or_else(|| local_name(m.value()).to_owned());
        let unit = data
            .first_object(&m, &profile.unit)
            .map(|t| label(&t, data))
            .unwrap_or_default();
        let values = data.objects(&m, &profile.value);
        if values.is_empty() {
            warnings.push(format!("measure {} has no value", m.value()));
        }
        for v in values {
            match parse_number(&v) {
                Some(value) => measures.push(Measure {
                    measure_type: measure_type.clone(),
                    value,
                    unit: unit.clone(),
                }),
                None => warnings.push(format!("measure {} has unparsable value {v}", m.value())),
            }
        }
    }
    measures.sort_by(|a, b| {
        a.measure_type
            .cmp(&b.measure_type)
            .then(a.value.total_cmp(&b.value))
            .then_with(|| a.unit.cmp(&b.unit))
    });
    Ok(MeasurementFrame {
        subject: labeled(&subject, data),
        collection: collection.value().to_owned(),
        measures,
    })
}

/// One entry per (location type, place) of every situation node in the
/// occurrence, sorted by start year with absent starts last.
pub fn frame_titl(
    occurrence: &Occurrence,
    data: &Graph,
    profile: &TimedLocationProfile,
    warnings: &mut Vec<String>,
) -> Result<TimedLocationFrame, FrameError> {
    let situations: Vec<Term> = occurrence
        .members
        .iter()
        .filter(|m| !data.objects(m, &profile.at_location).is_empty())
        .cloned()
        .collect();
    let first = occurrence
        .anchor
        .clone()
        .or_else(|| situations.first().cloned())
        .ok_or_else(|| malformed(occurrence, "no located situation"))?;
    let subject =
        owner_of(occurrence, &first, &profile.owner, data).unwrap_or_else(|| first.clone());
    let mut entries = Vec::new();
    for s in &situations {
        let mut types: Vec<String> = data
            .objects(s, &profile.location_type)
            .iter()
            .map(|t| label(t, data))
            .collect();
        if types.is_empty() {
            types.push(String::new());
        }
        let times = data.objects(s, &profile.at_time);
        let pick = |pred: &str| {
            times
                .iter()
                .flat_map(|t| data.objects(t, pred))
                .min_by_key(|v| (parse_year(v).is_none(), parse_year(v), v.clone()))
                .map(|v| label(&v, data))
        };
        let (start, end) = (pick(&profile.start), pick(&profile.end));
        for place in data.objects(s, &profile.at_location) {
            let lat = data.first_object(&place, &profile.lat);
            let lon = data.first_object(&place, &profile.lon);
            let coords = match (
                lat.as_ref().and_then(parse_number),
                lon.as_ref().and_then(parse_number),
            ) {
                (Some(a), Some(o))
                    if (-90.0..=90.0).contains(&a) && (-180.0..=180.0).contains(&o) =>
                {
                    Some((a, o))
                }
                (Some(a), Some(o)) => {
                    warnings.push(format!(
                        "place {} has out-of-range coordinates ({a}, {o})",
                        place.value()
                    ));
                    None
                }
                _ if lat.is_some() || lon.is_some() => {
                    warnings.push(format!(
                        "place {} has incomplete or unparsable coordinates",
                        place.value()
                    ));
                    None
                }
                _ => None,
            };
            for t in &types {
                entries.push(LocationEntry {
                    location_type: t.clone(),
                    place: label(&place, data),
                    lat: coords.map(|c| c.0),
                    lon: coords.map(|c| c.1),
                    start: start.clone(),
                    end: end.clone(),
                });
            }
        }
    }
    let year = |s: &Option<String>| {
        s.as_deref()
            .and_then(|s| s.get(..4))
            .and_then(|y| y.parse::<i64>().ok())
    };
    entries.sort_by(|a, b| {
        let (ya, yb) = (year(&a.start), year(&b.start));
        (ya.is_none(), ya, &a.start, &a.place, &a.location_type).cmp(&(
            yb.is_none(),
            yb,
            &b.start,
            &b.place,
            &b.location_type,
        ))
    });
    Ok(TimedLocationFrame {
        subject: labeled(&subject, data),
        entries,
    })
}

/// Builds the frame for an occurrence with the builder registered for its
/// pattern.
pub fn vmap(
    frames: &FrameRegistry,
    occurrence: &Occurrence,
    data: &Graph,
) -> Result<VisualFrame, FrameError> {
    let builder = frames
        .get(&occurrence.pattern)
        .ok_or_else(|| FrameError::UnsupportedPattern(occurrence.pattern.clone()))?;
    let mut warnings = Vec::new();
    let frame = match builder {
        FrameBuilder::PartOf => Frame::PartOf(frame_part_of(occurrence, data)?),
        FrameBuilder::MeasurementCollection(p) => Frame::MeasurementCollection(
            frame_measurement_collection(occurrence, data, p, &mut warnings)?,
        ),
        FrameBuilder::TimedLocation(p) => {
            Frame::TimedLocation(frame_titl(occurrence, data, p, &mut warnings)?)
        }
    };
    Ok(VisualFrame {
        pattern: occurrence.pattern.clone(),
        instance: occurrence.instance.clone(),
        frame,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyValue {
    pub predicate: String,
    pub object: Term,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceView {
    pub resource: String,
    pub properties: Vec<PropertyValue>,
    pub frames: Vec<VisualFrame>,
}

impl ResourceView {
    pub fn is_empty(&self) -> bool {
        self.properties.is_empty() && self.frames.is_empty()
    }
}

/// Property values of `resource` plus one frame per supported pattern
/// instance it belongs to, ordered by pattern then instance.
pub fn mosaic(
    resource: &Term,
    data: &Graph,
    annotations: &Graph,
    frames: &FrameRegistry,
) -> Result<ResourceView, FrameError> {
    let properties = data
        .neighborhood(resource)
        .into_iter()
        .filter(|t| !t.predicate.value().starts_with(opla::NS))
        .map(|t| PropertyValue {
            predicate: t.predicate.value().to_owned(),
            object: t.object,
        })
        .collect();
    let mut occurrences = Vec::new();
    for inst in annotations.objects(resource, opla::BELONGS_TO_PATTERN_INSTANCE) {
        let Some(iri) = inst.as_iri() else { continue };
        if let Some(occ) = occurrence_for_instance(data, annotations, iri)? {
            if frames.supports(&occ.pattern) {
                occurrences.push(occ);
            }
        }
    }
    occurrences.sort_by(|a, b| (&a.pattern, &a.instance).cmp(&(&b.pattern, &b.instance)));
    let frames = occurrences
        .iter()
        .map(|o| vmap(frames, o, data))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ResourceView {
        resource: resource.value().to_owned(),
        properties,
        frames,
    })
}

/// Label of a resource for display, falling back to the local name.
pub fn resource_label(data: &Graph, iri: &str) -> String {
    data.first_object(&Term::iri(iri), rdfs::LABEL)
        .and_then(|t| t.as_literal().map(|l| l.lexical.clone()))
        .unwrap_or_else(|| local_name(iri).to_owned())
}
