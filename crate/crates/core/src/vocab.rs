//! IRI constants for the vocabularies the engine reads and writes.

pub mod rdf {
    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}

pub mod rdfs {
    pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
    pub const COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
    pub const CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
    pub const SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
    pub const RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
}

pub mod owl {
    pub const NS: &str = "http://www.w3.org/2002/07/owl#";
    pub const CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
    pub const OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
    pub const DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";
    pub const RESTRICTION: &str = "http://www.w3.org/2002/07/owl#Restriction";
    pub const ON_PROPERTY: &str = "http://www.w3.org/2002/07/owl#onProperty";
    pub const ALL_VALUES_FROM: &str = "http://www.w3.org/2002/07/owl#allValuesFrom";
    pub const SOME_VALUES_FROM: &str = "http://www.w3.org/2002/07/owl#someValuesFrom";
}

pub mod xsd {
    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const G_YEAR: &str = "http://www.w3.org/2001/XMLSchema#gYear";
    pub const DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
}

pub mod foaf {
    pub const DEPICTION: &str = "http://xmlns.com/foaf/0.1/depiction";
}

pub mod geo {
    pub const WKT_LITERAL: &str = "http://www.opengis.net/ont/geosparql#wktLiteral";
}

/// OPLa, including the instance-level extension properties.
pub mod opla {
    pub const NS: &str = "http://ontologydesignpatterns.org/opla/";
    pub const IS_NATIVE_TO: &str = "http://ontologydesignpatterns.org/opla/isNativeTo";
    pub const SPECIALIZATION_OF_PATTERN: &str =
        "http://ontologydesignpatterns.org/opla/specializationOfPattern";
    pub const PATTERN: &str = "http://ontologydesignpatterns.org/opla/Pattern";
    pub const PATTERN_INSTANCE: &str = "http://ontologydesignpatterns.org/opla/PatternInstance";
    pub const IS_PATTERN_INSTANCE_OF: &str =
        "http://ontologydesignpatterns.org/opla/isPatternInstanceOf";
    pub const BELONGS_TO_PATTERN_INSTANCE: &str =
        "http://ontologydesignpatterns.org/opla/belongsToPatternInstance";
    pub const HAS_PATTERN_INSTANCE_MEMBER: &str =
        "http://ontologydesignpatterns.org/opla/hasPatternInstanceMember";
}
