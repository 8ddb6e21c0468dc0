//! Deterministic synthetic heritage KG with ground-truth answers.
//!
//! The generator writes an ontology with OPLa annotations, instance data
//! realizing exact occurrence counts for the three built-in patterns, the
//! matching templates, and the expected answer of each named exploration
//! query. Answers are counted while records are emitted, from the values
//! chosen for them, so they do not depend on the engine under test.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{
    parse_document, serialize_graph, Format, Graph, GraphPart, OutputFormat, Term, Triple,
};
use crate::heritage::{class, location_type, pattern, prop, NS};
use crate::summary::degree_centrality;
use crate::vocab::{foaf, rdf, rdfs, xsd};

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("invalid fixture spec: {0}")]
    InvalidSpec(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaceSpec {
    pub label: String,
    pub lat: Option<f64>,
    pub lon: Option<f64>,
}

impl PlaceSpec {
    fn new(label: &str, coords: Option<(f64, f64)>) -> Self {
        Self {
            label: label.to_owned(),
            lat: coords.map(|c| c.0),
            lon: coords.map(|c| c.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FixtureSpec {
    pub seed: u64,
    pub n_properties: usize,
    pub n_part_of: usize,
    pub n_titl: usize,
    pub n_mc: usize,
    pub places: Vec<PlaceSpec>,
    pub authors: Vec<String>,
}

pub const DEFAULT_SEED: u64 = 20_210_614;

const FIRENZE: &str = "Firenze";
const BOLOGNA: &str = "Bologna";
const PARIS: &str = "Paris";
const PRAMPOLINI: &str = "Prampolini Enrico";

impl Default for FixtureSpec {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            n_properties: 200,
            n_part_of: 49,
            n_titl: 270,
            n_mc: 158,
            places: vec![
                PlaceSpec::new(FIRENZE, Some((43.7696, 11.2558))),
                PlaceSpec::new(BOLOGNA, Some((44.4949, 11.3426))),
                PlaceSpec::new("Roma", Some((41.9028, 12.4964))),
                PlaceSpec::new("Torino", Some((45.0703, 7.6869))),
                PlaceSpec::new("Caravino", Some((45.4950, 7.9597))),
                PlaceSpec::new("Vittorio Veneto", Some((45.9886, 12.2970))),
                PlaceSpec::new(PARIS, Some((48.8566, 2.3522))),
                PlaceSpec::new("Deposito Esterno", None),
            ],
            authors: vec![
                PRAMPOLINI.into(),
                "Canova Antonio".into(),
                "Balla Giacomo".into(),
                "Morandi Giorgio".into(),
                "Carra Carlo".into(),
                "Anonimo".into(),
            ],
        }
    }
}

impl FixtureSpec {
    pub fn validate(&self) -> Result<(), FixtureError> {
        let bad = |m: String| Err(FixtureError::InvalidSpec(m));
        if self.n_part_of > self.n_properties {
            return bad(format!(
                "{} part-of wholes for {} properties",
                self.n_part_of, self.n_properties
            ));
        }
        if self.n_mc > self.n_properties {
            return bad(format!(
                "{} collections for {} properties",
                self.n_mc, self.n_properties
            ));
        }
        if self.n_titl > 0 && self.n_properties == 0 {
            return bad("located records need at least one property".into());
        }
        if self.n_titl > 0 && self.places.is_empty() {
            return bad("located records need at least one place".into());
        }
        for p in &self.places {
            if p.lat.is_some() != p.lon.is_some() {
                return bad(format!("place {} has only one coordinate", p.label));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthQuery {
    pub name: String,
    pub pattern: String,
    pub filters: String,
    pub world: String,
    pub expected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub queries: Vec<GroundTruthQuery>,
}

impl GroundTruth {
    pub fn get(&self, name: &str) -> Option<&GroundTruthQuery> {
        self.queries.iter().find(|q| q.name == name)
    }
}

/// The Paris rectangle used by the 1856 scenario, as `(lat, lon)`.
pub const PARIS_POLYGON: [(f64, f64); 4] =
    [(48.80, 2.22), (48.80, 2.47), (48.92, 2.47), (48.92, 2.22)];

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub ontology: String,
    pub data: String,
    pub templates: String,
    pub ground_truth: GroundTruth,
    /// Default key-concept threshold: the importance of the top class.
    pub threshold: usize,
}

/// Template text for the three built-in patterns.
pub fn builtin_templates() -> String {
    format!(
        "# Templates for the built-in heritage patterns.\n\
         PREFIX ex: <{NS}>\n\
         \n\
         PATTERN <{cpco}>\n\
         NAME PartOf\n\
         ANCHOR ?whole\n\
         REQUIRED ?whole ex:hasPart ?part\n\
         MEMBERS ?whole ?part\n\
         \n\
         PATTERN <{titl}>\n\
         NAME TITL\n\
         ANCHOR ?titl\n\
         REQUIRED ?cp ex:hasTimeIndexedTypedLocation ?titl\n\
         REQUIRED ?titl ex:hasLocationType ?type\n\
         REQUIRED ?titl ex:atLocation ?place\n\
         OPTIONAL ?titl ex:atTime ?time\n\
         MEMBERS ?titl ?cp ?place ?time\n\
         \n\
         PATTERN <{mc}>\n\
         NAME MC\n\
         ANCHOR ?mc\n\
         REQUIRED ?cp ex:hasMeasurementCollection ?mc\n\
         REQUIRED ?mc a ex:MeasurementCollection\n\
         OPTIONAL ?mc ex:hasMember ?m\n\
         MEMBERS ?cp ?mc ?m\n",
        cpco = pattern::COMPONENT_OF,
        titl = pattern::TIME_INDEXED_TYPED_LOCATION,
        mc = pattern::MEASUREMENT_COLLECTION,
    )
}

fn ontology_text() -> String {
    let mut o = format!(
        "@prefix ex: <{NS}> .\n\
         @prefix odp: <http://example.org/odp/> .\n\
         @prefix opla: <http://ontologydesignpatterns.org/opla/> .\n\
         @prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
         @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
         @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\n"
    );
    let patterns = [
        ("PartOf", "Part Of", None),
        (
            "CulturalPropertyComponentOf",
            "Cultural Property Component Of",
            Some("PartOf"),
        ),
        ("TimeIndexedSituation", "Time-Indexed Situation", None),
        (
            "TimeIndexedTypedLocation",
            "Time-Indexed Typed Location",
            Some("TimeIndexedSituation"),
        ),
        ("Collection", "Collection", None),
        (
            "MeasurementCollection",
            "Measurement Collection",
            Some("Collection"),
        ),
    ];
    for (id, label, parent) in patterns {
        let _ = write!(o, "odp:{id} a opla:Pattern ;\n    rdfs:label \"{label}\"");
        if let Some(p) = parent {
            let _ = write!(o, " ;\n    opla:specializationOfPattern odp:{p}");
        }
        o.push_str(" .\n");
    }
    o.push('\n');
    let classes = [
        ("CulturalProperty", "Cultural Property", "odp:CulturalPropertyComponentOf, odp:TimeIndexedTypedLocation, odp:MeasurementCollection"),
        ("CulturalPropertyComponent", "Cultural Property Component", "odp:CulturalPropertyComponentOf"),
        ("MeasurementCollection", "Measurement Collection", "odp:MeasurementCollection"),
        ("Measurement", "Measurement", "odp:MeasurementCollection"),
        ("TimeIndexedTypedLocation", "Time-Indexed Typed Location", "odp:TimeIndexedTypedLocation"),
        ("TimeInterval", "Time Interval", "odp:TimeIndexedTypedLocation"),
        ("Place", "Place", "odp:TimeIndexedTypedLocation"),
        ("LocationType", "Location Type", "odp:TimeIndexedTypedLocation"),
    ];
    for (id, label, native) in classes {
        let _ = writeln!(
            o,
            "ex:{id} a owl:Class ;\n    rdfs:label \"{label}\" ;\n    opla:isNativeTo {native} ."
        );
    }
    o.push_str(
        "ex:Agent a owl:Class ;\n    rdfs:label \"Agent\" .\n\
         ex:CulturalProperty rdfs:comment \"A movable or immovable heritage object.\" ;\n    rdfs:subClassOf _:onlyComponents .\n\
         _:onlyComponents a owl:Restriction ;\n    owl:onProperty ex:hasPart ;\n    owl:allValuesFrom ex:CulturalPropertyComponent .\n\n",
    );
    let properties = [
        (
            "hasPart",
            "ObjectProperty",
            "CulturalProperty",
            "CulturalPropertyComponent",
        ),
        ("author", "ObjectProperty", "CulturalProperty", "Agent"),
        (
            "hasMeasurementCollection",
            "ObjectProperty",
            "CulturalProperty",
            "MeasurementCollection",
        ),
        (
            "hasMember",
            "ObjectProperty",
            "MeasurementCollection",
            "Measurement",
        ),
        ("measurementType", "DatatypeProperty", "Measurement", ""),
        ("value", "DatatypeProperty", "Measurement", ""),
        ("unit", "DatatypeProperty", "Measurement", ""),
        (
            "hasTimeIndexedTypedLocation",
            "ObjectProperty",
            "CulturalProperty",
            "TimeIndexedTypedLocation",
        ),
        (
            "hasLocationType",
            "ObjectProperty",
            "TimeIndexedTypedLocation",
            "LocationType",
        ),
        (
            "atLocation",
            "ObjectProperty",
            "TimeIndexedTypedLocation",
            "Place",
        ),
        (
            "atTime",
            "ObjectProperty",
            "TimeIndexedTypedLocation",
            "TimeInterval",
        ),
        ("startTime", "DatatypeProperty", "TimeInterval", ""),
        ("endTime", "DatatypeProperty", "TimeInterval", ""),
        ("lat", "DatatypeProperty", "Place", ""),
        ("long", "DatatypeProperty", "Place", ""),
    ];
    for (id, kind, domain, range) in properties {
        let _ = write!(o, "ex:{id} a owl:{kind} ;\n    rdfs:domain ex:{domain}");
        if !range.is_empty() {
            let _ = write!(o, " ;\n    rdfs:range ex:{range}");
        }
        o.push_str(" .\n");
    }
    o
}

fn slug(label: &str) -> String {
    label
        .to_lowercase()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect()
}

const KINDS: [&str; 6] = [
    "Dipinto",
    "Scultura",
    "Altare",
    "Reliquiario",
    "Arazzo",
    "Mobile",
];
const MEASURE_TYPES: [&str; 5] = ["height", "width", "depth", "length", "diameter"];
const SURPLUS_TYPES: [&str; 3] = [
    location_type::STORAGE,
    location_type::EXHIBITION,
    location_type::PREVIOUS,
];

struct Builder {
    g: Graph,
}

impl Builder {
    fn add(&mut self, s: &str, p: &str, o: Term) {
        self.g.insert(Triple::new(Term::iri(s), Term::iri(p), o));
    }

    fn link(&mut self, s: &str, p: &str, o: &str) {
        self.add(s, p, Term::iri(o));
    }
}

fn year_literal(year: i64, as_datetime: bool) -> Term {
    if as_datetime {
        Term::typed(format!("{year:04}-01-01T00:00:00"), xsd::DATE_TIME)
    } else {
        Term::typed(format!("{year:04}"), xsd::G_YEAR)
    }
}

#[derive(Default)]
struct Counts {
    es1: usize,
    es2: usize,
    es3: usize,
    es4: usize,
    es5: usize,
    paris: usize,
}

struct Located<'a> {
    owner: usize,
    kind: &'a str,
    place: usize,
    start: Option<i64>,
    end: Option<i64>,
    has_time: bool,
}

/// Generates the fixture in memory.
pub fn generate(spec: &FixtureSpec) -> Result<Fixture, FixtureError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut b = Builder {
        g: Graph::new(GraphPart::Data),
    };
    let mut counts = Counts::default();
    let cp = |i: usize| format!("{NS}cp/{:04}", i + 1);
    let place_iri = |p: &PlaceSpec| format!("{NS}place/{}", slug(&p.label));
    let find_place = |label: &str| spec.places.iter().position(|p| p.label == label);
    let find_author = |label: &str| spec.authors.iter().position(|a| a == label);

    for lt in [
        location_type::CURRENT,
        location_type::STORAGE,
        location_type::EXHIBITION,
        location_type::PREVIOUS,
    ] {
        b.link(lt, rdf::TYPE, class::LOCATION_TYPE);
    }
    for p in &spec.places {
        let iri = place_iri(p);
        b.link(&iri, rdf::TYPE, class::PLACE);
        b.add(&iri, rdfs::LABEL, Term::string(p.label.as_str()));
        if let (Some(lat), Some(lon)) = (p.lat, p.lon) {
            b.add(
                &iri,
                prop::LAT,
                Term::typed(format!("{lat:.4}"), xsd::DECIMAL),
            );
            b.add(
                &iri,
                prop::LONG,
                Term::typed(format!("{lon:.4}"), xsd::DECIMAL),
            );
        }
    }
    for a in &spec.authors {
        let iri = format!("{NS}agent/{}", slug(a));
        b.link(&iri, rdf::TYPE, class::AGENT);
        b.add(&iri, rdfs::LABEL, Term::string(a.as_str()));
    }

    // Properties and their authors.
    let mut authors: Vec<Option<usize>> = Vec::with_capacity(spec.n_properties);
    for i in 0..spec.n_properties {
        let iri = cp(i);
        b.link(&iri, rdf::TYPE, class::CULTURAL_PROPERTY);
        let kind = KINDS.choose(&mut rng).expect("non-empty");
        b.add(&iri, rdfs::LABEL, Term::string(format!("{kind} {}", i + 1)));
        if rng.gen_bool(0.5) {
            b.link(
                &iri,
                foaf::DEPICTION,
                &format!("http://example.org/images/cp{:04}.jpg", i + 1),
            );
        }
        let author = if i == 1 && find_author(PRAMPOLINI).is_some() {
            find_author(PRAMPOLINI)
        } else if !spec.authors.is_empty() && rng.gen_bool(0.9) {
            Some(rng.gen_range(0..spec.authors.len()))
        } else {
            None
        };
        if let Some(a) = author {
            b.link(
                &iri,
                prop::AUTHOR,
                &format!("{NS}agent/{}", slug(&spec.authors[a])),
            );
        }
        authors.push(author);
    }

    // Part-whole records.
    let mut wholes = index::sample(&mut rng, spec.n_properties, spec.n_part_of).into_vec();
    wholes.sort_unstable();
    for (k, &i) in wholes.iter().enumerate() {
        let whole = cp(i);
        let n_parts = if k == 0 { 9 } else { rng.gen_range(1..=12) };
        for p in 0..n_parts {
            let part = format!("{NS}component/{:04}-{:02}", i + 1, p + 1);
            b.link(&whole, prop::HAS_PART, &part);
            b.link(&part, rdf::TYPE, class::COMPONENT);
            if rng.gen_bool(0.8) {
                b.add(
                    &part,
                    rdfs::LABEL,
                    Term::string(format!("Component {} of {}", p + 1, i + 1)),
                );
            }
            if rng.gen_bool(0.3) {
                b.link(
                    &part,
                    foaf::DEPICTION,
                    &format!("http://example.org/images/c{:04}-{:02}.jpg", i + 1, p + 1),
                );
            }
        }
        if n_parts >= 8 {
            counts.es2 += 1;
        }
    }

    // Measurement collections.
    let mut owners = index::sample(&mut rng, spec.n_properties, spec.n_mc).into_vec();
    owners.sort_unstable();
    for (k, &i) in owners.iter().enumerate() {
        let mc = format!("{NS}mc/{:04}", i + 1);
        b.link(&cp(i), prop::HAS_MEASUREMENT_COLLECTION, &mc);
        b.link(&mc, rdf::TYPE, class::MEASUREMENT_COLLECTION);
        let mut tall = false;
        for t in MEASURE_TYPES {
            let p = if t == "height" { 0.75 } else { 0.5 };
            let forced = k == 0 && t == "height";
            if !forced && !rng.gen_bool(p) {
                continue;
            }
            let cents: u32 = if forced { 250 } else { rng.gen_range(10..=400) };
            if t == "height" && cents >= 200 {
                tall = true;
            }
            let m = format!("{NS}measure/{:04}-{t}", i + 1);
            b.link(&mc, prop::HAS_MEMBER, &m);
            b.link(&m, rdf::TYPE, class::MEASUREMENT);
            b.add(&m, prop::MEASUREMENT_TYPE, Term::string(t));
            b.add(
                &m,
                prop::VALUE,
                Term::typed(format!("{}.{:02}", cents / 100, cents % 100), xsd::DECIMAL),
            );
            b.add(&m, prop::UNIT, Term::string("m"));
        }
        if k == 0 {
            // The single dirty literal: a weight recorded as "n/a".
            let m = format!("{NS}measure/{:04}-weight", i + 1);
            b.link(&mc, prop::HAS_MEMBER, &m);
            b.link(&m, rdf::TYPE, class::MEASUREMENT);
            b.add(&m, prop::MEASUREMENT_TYPE, Term::string("weight"));
            b.add(&m, prop::VALUE, Term::string("n/a"));
            b.add(&m, prop::UNIT, Term::string("kg"));
        }
        if tall {
            counts.es1 += 1;
        }
    }

    // Timed locations: one current location per property, then the
    // surplus spread uniformly at random over properties.
    let base = spec.n_titl.min(spec.n_properties);
    let mut records: Vec<Located> = Vec::with_capacity(spec.n_titl);
    for i in 0..base {
        let forced_place = match i {
            0 => find_place(FIRENZE),
            1 => find_place(BOLOGNA),
            2 if spec.n_titl == base => find_place(PARIS),
            _ => None,
        };
        let place = forced_place.unwrap_or_else(|| rng.gen_range(0..spec.places.len()));
        let has_time = forced_place.is_some() || rng.gen_bool(0.9);
        let start = match (i, forced_place.is_some()) {
            (0, true) => 1930,
            (2, true) => 1850,
            _ => rng.gen_range(1900..=2020),
        };
        records.push(Located {
            owner: i,
            kind: location_type::CURRENT,
            place,
            start: has_time.then_some(start),
            end: None,
            has_time,
        });
    }
    for j in 0..spec.n_titl - base {
        let owner = rng.gen_range(0..spec.n_properties);
        let kind = *SURPLUS_TYPES.choose(&mut rng).expect("non-empty");
        let forced = if j == 0 { find_place(PARIS) } else { None };
        let place = forced.unwrap_or_else(|| rng.gen_range(0..spec.places.len()));
        let has_time = forced.is_some() || rng.gen_bool(0.9);
        let (start, end) = if forced.is_some() {
            (1850, 1860)
        } else {
            let s = rng.gen_range(1800..=1990);
            (s, s + rng.gen_range(0..=60))
        };
        records.push(Located {
            owner,
            kind,
            place,
            start: has_time.then_some(start),
            end: has_time.then_some(end),
            has_time,
        });
    }
    for (j, r) in records.iter().enumerate() {
        let titl = format!("{NS}titl/{:04}", j + 1);
        b.link(&cp(r.owner), prop::HAS_TIME_INDEXED_TYPED_LOCATION, &titl);
        b.link(&titl, rdf::TYPE, class::TIME_INDEXED_TYPED_LOCATION);
        b.link(&titl, prop::HAS_LOCATION_TYPE, r.kind);
        let place = &spec.places[r.place];
        b.link(&titl, prop::AT_LOCATION, &place_iri(place));
        if r.has_time {
            let interval = format!("{NS}interval/{:04}", j + 1);
            b.link(&titl, prop::AT_TIME, &interval);
            b.link(&interval, rdf::TYPE, class::TIME_INTERVAL);
            let as_datetime = rng.gen_bool(0.2);
            if let Some(s) = r.start {
                b.add(&interval, prop::START_TIME, year_literal(s, as_datetime));
            }
            if let Some(e) = r.end {
                b.add(&interval, prop::END_TIME, year_literal(e, as_datetime));
            }
        }
        // Ground truth, from the values just written.
        let lo = r.start.unwrap_or(i64::MIN);
        let hi = r.end.unwrap_or(i64::MAX);
        let timed = r.start.is_some() || r.end.is_some();
        if place.label == FIRENZE && r.kind == location_type::CURRENT {
            counts.es3 += 1;
        }
        if place.label == FIRENZE && timed && lo <= 1944 {
            counts.es4 += 1;
        }
        if place.label == BOLOGNA && authors[r.owner].is_some_and(|a| spec.authors[a] == PRAMPOLINI)
        {
            counts.es5 += 1;
        }
        if place.label == PARIS && timed && lo <= 1856 && hi >= 1856 {
            counts.paris += 1;
        }
    }

    let ontology = ontology_text();
    let onto_graph =
        parse_document(&ontology, Format::TurtleSubset, None).expect("generated ontology parses");
    let threshold = degree_centrality(&onto_graph, class::CULTURAL_PROPERTY);
    let paris_polygon: Vec<String> = PARIS_POLYGON
        .iter()
        .map(|(a, o)| format!("{a:.2} {o:.2}"))
        .collect();
    let q = |name: &str, pattern: &str, filters: String, world: &str, expected: usize| {
        GroundTruthQuery {
            name: name.into(),
            pattern: pattern.into(),
            filters,
            world: world.into(),
            expected,
        }
    };
    let ground_truth = GroundTruth {
        queries: vec![
            q(
                "es1",
                pattern::MEASUREMENT_COLLECTION,
                "height:gte:2m".into(),
                "closed",
                counts.es1,
            ),
            q(
                "es2",
                pattern::COMPONENT_OF,
                "components:gte:8".into(),
                "open",
                counts.es2,
            ),
            q(
                "es3",
                pattern::TIME_INDEXED_TYPED_LOCATION,
                "place:in:Firenze,loctype:in:CurrentLocation".into(),
                "closed",
                counts.es3,
            ),
            q(
                "es4",
                pattern::TIME_INDEXED_TYPED_LOCATION,
                "place:in:Firenze,time:lte:1944".into(),
                "closed",
                counts.es4,
            ),
            q(
                "es5",
                pattern::TIME_INDEXED_TYPED_LOCATION,
                format!("author:in:{PRAMPOLINI},place:in:Bologna"),
                "closed",
                counts.es5,
            ),
            q(
                "paris_1856",
                pattern::TIME_INDEXED_TYPED_LOCATION,
                format!(
                    "coords:within:{},time:between:1856..1856",
                    paris_polygon.join(";")
                ),
                "closed",
                counts.paris,
            ),
        ],
    };
    Ok(Fixture {
        ontology,
        data: serialize_graph(&b.g, OutputFormat::NTriples),
        templates: builtin_templates(),
        ground_truth,
        threshold,
    })
}

/// File names written by [`synth`].
pub const ONTOLOGY_FILE: &str = "ontology.ttl";
pub const DATA_FILE: &str = "data.nt";
pub const TEMPLATES_FILE: &str = "templates.txt";
pub const GROUND_TRUTH_FILE: &str = "groundtruth.json";
pub const CONFIG_FILE: &str = "dataset.json";

/// Generates the fixture and writes it, plus a dataset config pointing at
/// the generated files, into `out_dir`.
pub fn synth(spec: &FixtureSpec, out_dir: &Path) -> Result<Fixture, FixtureError> {
    let fixture = generate(spec)?;
    let io = |path: PathBuf| move |source| FixtureError::Io { path, source };
    std::fs::create_dir_all(out_dir).map_err(io(out_dir.to_owned()))?;
    let config = serde_json::json!({
        "datasets": [{
            "id": "fixture",
            "ontology": [ONTOLOGY_FILE],
            "data": [DATA_FILE],
            "annotations": [],
            "templates": TEMPLATES_FILE,
            "threshold": fixture.threshold,
        }]
    });
    let files = [
        (ONTOLOGY_FILE, fixture.ontology.clone()),
        (DATA_FILE, fixture.data.clone()),
        (TEMPLATES_FILE, fixture.templates.clone()),
        (GROUND_TRUTH_FILE, pretty(&fixture.ground_truth)),
        (CONFIG_FILE, pretty(&config)),
    ];
    for (name, body) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, body).map_err(io(path.clone()))?;
    }
    Ok(fixture)
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
