//! Vocabulary of the built-in cultural-heritage patterns: part-whole
//! (cultural property components), measurement collections, and
//! time-indexed typed locations. The synthetic fixture, the built-in table
//! schemas and the built-in frame profiles all use these IRIs.

/// Namespace of the heritage classes and properties.
pub const NS: &str = "http://example.org/heritage/";
/// Namespace of the pattern IRIs.
pub const ODP_NS: &str = "http://example.org/odp/";

pub mod pattern {
    pub const PART_OF: &str = "http://example.org/odp/PartOf";
    pub const COMPONENT_OF: &str = "http://example.org/odp/CulturalPropertyComponentOf";
    pub const TIME_INDEXED_SITUATION: &str = "http://example.org/odp/TimeIndexedSituation";
    pub const TIME_INDEXED_TYPED_LOCATION: &str = "http://example.org/odp/TimeIndexedTypedLocation";
    pub const COLLECTION: &str = "http://example.org/odp/Collection";
    pub const MEASUREMENT_COLLECTION: &str = "http://example.org/odp/MeasurementCollection";
}

pub mod class {
    pub const CULTURAL_PROPERTY: &str = "http://example.org/heritage/CulturalProperty";
    pub const COMPONENT: &str = "http://example.org/heritage/CulturalPropertyComponent";
    pub const MEASUREMENT_COLLECTION: &str = "http://example.org/heritage/MeasurementCollection";
    pub const MEASUREMENT: &str = "http://example.org/heritage/Measurement";
    pub const TIME_INDEXED_TYPED_LOCATION: &str =
        "http://example.org/heritage/TimeIndexedTypedLocation";
    pub const TIME_INTERVAL: &str = "http://example.org/heritage/TimeInterval";
    pub const PLACE: &str = "http://example.org/heritage/Place";
    pub const LOCATION_TYPE: &str = "http://example.org/heritage/LocationType";
    pub const AGENT: &str = "http://example.org/heritage/Agent";
}

pub mod prop {
    pub const HAS_PART: &str = "http://example.org/heritage/hasPart";
    pub const AUTHOR: &str = "http://example.org/heritage/author";
    pub const HAS_MEASUREMENT_COLLECTION: &str =
        "http://example.org/heritage/hasMeasurementCollection";
    pub const HAS_MEMBER: &str = "http://example.org/heritage/hasMember";
    pub const MEASUREMENT_TYPE: &str = "http://example.org/heritage/measurementType";
    pub const VALUE: &str = "http://example.org/heritage/value";
    pub const UNIT: &str = "http://example.org/heritage/unit";
    pub const HAS_TIME_INDEXED_TYPED_LOCATION: &str =
        "http://example.org/heritage/hasTimeIndexedTypedLocation";
    pub const HAS_LOCATION_TYPE: &str = "http://example.org/heritage/hasLocationType";
    pub const AT_LOCATION: &str = "http://example.org/heritage/atLocation";
    pub const AT_TIME: &str = "http://example.org/heritage/atTime";
    pub const START_TIME: &str = "http://example.org/heritage/startTime";
    pub const END_TIME: &str = "http://example.org/heritage/endTime";
    pub const LAT: &str = "http://example.org/heritage/lat";
    pub const LONG: &str = "http://example.org/heritage/long";
}

pub mod location_type {
    pub const CURRENT: &str = "http://example.org/heritage/CurrentLocation";
    pub const STORAGE: &str = "http://example.org/heritage/StorageLocation";
    pub const EXHIBITION: &str = "http://example.org/heritage/ExhibitionLocation";
    pub const PREVIOUS: &str = "http://example.org/heritage/PreviousLocation";
}
