//! Acceptance suite. Runs every primary criterion against the synthetic
//! fixture and prints one PASS/FAIL line per criterion; exits nonzero if
//! any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use odpkit_core::dataset::{load_config, Dataset};
use odpkit_core::explore::{emap, Filter, FilterSet, WorldAssumption};
use odpkit_core::fixture::{FixtureSpec, CONFIG_FILE, GROUND_TRUTH_FILE, PARIS_POLYGON};
use odpkit_core::graph::{
    match_bgp, parse_document_with_warnings, serialize_graph, BasicGraphPattern, Format, Graph,
    GraphPart, Literal, OutputFormat, Term, TermPattern, Triple, TriplePattern, Variable,
};
use odpkit_core::heritage::{class, pattern, prop};
use odpkit_core::occurrence::{annotate, detect_occurrences, occurrences_of};
use odpkit_service::{router, schemas, AppState};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tower::ServiceExt;

const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Ctx) -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Ctx {
    _dir: tempfile::TempDir,
    dir: PathBuf,
    config: PathBuf,
    dataset: Dataset,
}

impl Ctx {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().to_path_buf();
        let (code, _, err) = cli(&["synth", "--out", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
        let config = path.join(CONFIG_FILE);
        let dataset = Dataset::load(&load_config(&config).unwrap()[0]).unwrap();
        Self {
            _dir: dir,
            dir: path,
            config,
            dataset,
        }
    }

    fn config(&self) -> &str {
        self.config.to_str().unwrap()
    }
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = odpkit::run(
        std::iter::once("odpkit").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn main() {
    let ctx = Ctx::new();
    let criteria: [Criterion; 10] = [
        ("fixture counts", fixture_counts),
        ("summary topology", summary_topology),
        ("emap oracle", emap_oracle),
        ("world monotonicity", world_monotonicity),
        ("exploratory search tasks", exploratory_tasks),
        ("occurrence round trip", occurrence_round_trip),
        ("bgp matcher oracle", bgp_oracle),
        ("point-in-polygon oracle", point_in_polygon_oracle),
        ("parser round trip", parser_round_trip),
        ("api contract", api_contract),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| check(&ctx))).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| (*s).to_owned()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------------------
// Fixture counts and summary

fn fixture_counts(_: &Ctx) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let started = Instant::now();
    let (code, _, err) = cli(&["synth", "--out", out]);
    ensure!(code == 0, "synth exited {code}: {err}");
    let config = dir.path().join(CONFIG_FILE);
    let ann = dir.path().join("annotations.nt");
    let (code, stdout, err) = cli(&[
        "annotate",
        "-c",
        config.to_str().unwrap(),
        "-o",
        ann.to_str().unwrap(),
    ]);
    let elapsed = started.elapsed();
    ensure!(code == 0, "annotate exited {code}: {err}");
    let lines: BTreeSet<&str> = stdout.lines().collect();
    for want in ["PartOf: 49", "TITL: 270", "MC: 158"] {
        ensure!(lines.contains(want), "missing {want:?} in {stdout:?}");
    }
    ensure!(
        elapsed < Duration::from_secs(10),
        "pipeline took {elapsed:?}"
    );
    Ok(format!("49/270/158 in {:.2}s", elapsed.as_secs_f64()))
}

fn summary_topology(ctx: &Ctx) -> Outcome {
    let (code, json, err) = cli(&["summarize", "-c", ctx.config(), "--json"]);
    ensure!(code == 0, "summarize exited {code}: {err}");
    let summary: Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let has_edge = |s: &str, l: &str, t: &str| {
        summary["edges"]
            .as_array()
            .unwrap()
            .iter()
            .any(|e| e["source"] == s && e["label"] == l && e["target"] == t)
    };
    ensure!(
        has_edge(pattern::COMPONENT_OF, "specializes", pattern::PART_OF),
        "no CPCO specializes PartOf edge"
    );
    let has_view = summary["edges"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["source"] == class::CULTURAL_PROPERTY && e["label"] == "hasView");
    ensure!(has_view, "no hasView edge from CulturalProperty");

    let spec = FixtureSpec::default();
    let targets = BTreeMap::from([
        (pattern::COMPONENT_OF, spec.n_part_of),
        (pattern::TIME_INDEXED_TYPED_LOCATION, spec.n_titl),
        (pattern::MEASUREMENT_COLLECTION, spec.n_mc),
    ]);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for node in summary["nodes"].as_array().unwrap() {
        if node["kind"] != "Pattern" {
            continue;
        }
        let id = node["id"].as_str().unwrap();
        let count = targets.get(id).copied().unwrap_or(0);
        let expected = (count as f64 + 1.0).ln();
        let got = node["size"].as_f64().unwrap();
        worst = worst.max((got - expected).abs());
        ensure!(
            (got - expected).abs().le(&1e-9),
            "{id}: size {got} vs ln({count}+1) = {expected}"
        );
        checked += 1;
    }
    ensure!(checked >= 3, "only {checked} pattern nodes");

    let (_, text, _) = cli(&["summarize", "-c", ctx.config()]);
    for n in targets.values() {
        let want = format!("{:.4}", (*n as f64 + 1.0).ln());
        ensure!(text.contains(&want), "text table lacks size {want}");
    }
    Ok(format!("{checked} pattern sizes, max error {worst:.1e}"))
}

// ---------------------------------------------------------------------------
// Random filter sets and an independent tri-state evaluator

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Text,
    Category,
    Integer,
    Decimal,
    Year,
    Interval,
    Point,
}

struct PatternDims {
    pattern: &'static str,
    name: &'static str,
    dims: Vec<(&'static str, Kind)>,
}

fn pattern_dims() -> Vec<PatternDims> {
    vec![
        PatternDims {
            pattern: pattern::COMPONENT_OF,
            name: "PartOf",
            dims: vec![("label", Kind::Text), ("components", Kind::Integer)],
        },
        PatternDims {
            pattern: pattern::TIME_INDEXED_TYPED_LOCATION,
            name: "TITL",
            dims: vec![
                ("label", Kind::Text),
                ("loctype", Kind::Category),
                ("place", Kind::Text),
                ("start", Kind::Year),
                ("end", Kind::Year),
                ("coords", Kind::Point),
                ("time", Kind::Interval),
                ("author", Kind::Text),
            ],
        },
        PatternDims {
            pattern: pattern::MEASUREMENT_COLLECTION,
            name: "MC",
            dims: vec![
                ("label", Kind::Text),
                ("measures", Kind::Integer),
                ("height", Kind::Decimal),
                ("width", Kind::Decimal),
                ("depth", Kind::Decimal),
                ("weight", Kind::Decimal),
                ("Diameter", Kind::Decimal),
            ],
        },
    ]
}

const CATEGORY_POOL: &[&str] = &[
    "Firenze",
    "Bologna",
    "Roma",
    "Paris",
    "Torino",
    "Deposito Esterno",
    "CurrentLocation",
    "StorageLocation",
    "ExhibitionLocation",
    "PreviousLocation",
    "Prampolini Enrico",
    "Canova Antonio",
    "Anonimo",
    "http://example.org/heritage/CurrentLocation",
    "Dipinto 1",
    "Scultura 80",
    "nowhere",
];

const NEEDLES: &[&str] = &[
    "a", "ren", "scul", "DIP", "pram", "location", "zz", "1", "o ", "Esterno", "current",
];

fn random_polygon(rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    match rng.gen_range(0..3) {
        0 => PARIS_POLYGON.to_vec(),
        1 => {
            let (lat, lon) = (rng.gen_range(40.0..50.0), rng.gen_range(0.0..15.0));
            let (h, w) = (rng.gen_range(0.1..4.0), rng.gen_range(0.1..4.0));
            vec![
                (lat, lon),
                (lat, lon + w),
                (lat + h, lon + w),
                (lat + h, lon),
            ]
        }
        _ => {
            let centre = (rng.gen_range(41.0..49.0), rng.gen_range(2.0..13.0));
            star_polygon(rng, centre, 4.0)
        }
    }
}

/// A simple polygon: vertices at sorted random angles and random radii
/// around a centre.
fn star_polygon(rng: &mut ChaCha8Rng, centre: (f64, f64), radius: f64) -> Vec<(f64, f64)> {
    let n = rng.gen_range(3..=9);
    let mut angles: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    angles
        .iter()
        .map(|a| {
            let r = rng.gen_range(radius * 0.1..radius);
            (centre.0 + r * a.sin(), centre.1 + r * a.cos())
        })
        .collect()
}

fn random_filter(rng: &mut ChaCha8Rng, dim: &str, kind: Kind) -> Filter {
    let dimension = dim.to_owned();
    match kind {
        Kind::Text | Kind::Category => {
            if rng.gen_bool(0.6) {
                let n = rng.gen_range(1..=3);
                Filter::Category {
                    dimension,
                    allowed: CATEGORY_POOL
                        .choose_multiple(rng, n)
                        .map(|s| (*s).to_owned())
                        .collect(),
                }
            } else {
                Filter::TextContains {
                    dimension,
                    needle: (*NEEDLES.choose(rng).unwrap()).to_owned(),
                }
            }
        }
        Kind::Integer => {
            let a = rng.gen_range(0..12) as f64;
            let b = a + rng.gen_range(0..6) as f64;
            let (min, max) = match rng.gen_range(0..3) {
                0 => (Some(a), None),
                1 => (None, Some(b)),
                _ => (Some(a), Some(b)),
            };
            Filter::NumericRange {
                dimension,
                min,
                max,
                unit: None,
            }
        }
        Kind::Decimal => {
            let (unit, scale) = *[
                (None, 1.0),
                (Some("m"), 1.0),
                (Some("cm"), 100.0),
                (Some("mm"), 1000.0),
                (Some("kg"), 1.0),
            ]
            .choose(rng)
            .unwrap();
            let a: f64 = rng.gen_range(0.0..4.2) * scale;
            let b: f64 = a + rng.gen_range(0.0..3.0) * scale;
            let (min, max) = match rng.gen_range(0..3) {
                0 => (Some(a), None),
                1 => (None, Some(b)),
                _ => (Some(a), Some(b)),
            };
            Filter::NumericRange {
                dimension,
                min,
                max,
                unit: unit.map(str::to_owned),
            }
        }
        Kind::Year | Kind::Interval => {
            let a: i64 = rng.gen_range(1800..2030);
            let b = a + rng.gen_range(0..120);
            let (start, end) = match rng.gen_range(0..3) {
                0 => (Some(a), None),
                1 => (None, Some(b)),
                _ => (Some(a), Some(b)),
            };
            Filter::TimeInterval {
                dimension,
                start,
                end,
            }
        }
        Kind::Point => Filter::GeoPolygon {
            dimension,
            vertices: random_polygon(rng),
        },
    }
}

fn random_filter_set(rng: &mut ChaCha8Rng, p: &PatternDims) -> FilterSet {
    let n = rng.gen_range(0..=3.min(p.dims.len()));
    let chosen: Vec<&(&str, Kind)> = p.dims.choose_multiple(rng, n).collect();
    let filters = chosen
        .iter()
        .map(|(d, k)| random_filter(rng, d, *k))
        .collect();
    let world = if rng.gen_bool(0.5) {
        WorldAssumption::Open
    } else {
        WorldAssumption::Closed
    };
    FilterSet::new(filters, world).expect("generated filters are valid")
}

fn local(iri: &str) -> &str {
    let cut = iri.rfind(['#', '/', ':']).map_or(0, |i| i + 1);
    &iri[cut..]
}

fn labels(g: &Graph, t: &Term) -> Vec<String> {
    g.objects(t, RDFS_LABEL)
        .into_iter()
        .filter_map(|l| l.as_literal().map(|l| l.lexical.clone()))
        .collect()
}

/// Names usable for category matching; `with_iri` adds the full IRI.
fn names(g: &Graph, t: &Term, with_iri: bool) -> Vec<String> {
    match t {
        Term::Literal(l) => vec![l.lexical.clone()],
        other => {
            let mut n = labels(g, other);
            n.push(local(other.value()).to_owned());
            if with_iri {
                n.push(other.value().to_owned());
            }
            n
        }
    }
}

fn number(t: &Term) -> Option<f64> {
    let l = t.as_literal()?;
    let numeric = ["integer", "decimal", "double"]
        .iter()
        .any(|d| l.datatype == format!("{XSD}{d}"));
    numeric
        .then(|| l.lexical.trim().parse::<f64>().ok())
        .flatten()
        .filter(|v| v.is_finite())
}

fn year(t: &Term) -> Option<i64> {
    let l = t.as_literal()?;
    let lex = l.lexical.trim();
    let (sign, body) = lex.strip_prefix('-').map_or((1, lex), |b| (-1, b));
    let digits: String = body.chars().take_while(char::is_ascii_digit).collect();
    if digits.len() < 4 {
        return None;
    }
    let rest = &body[digits.len()..];
    let ok = if l.datatype == format!("{XSD}gYear") {
        rest.is_empty() || rest == "Z" || rest.starts_with('+') || rest.starts_with('-')
    } else if l.datatype == format!("{XSD}dateTime") {
        rest.starts_with('-') && rest.contains('T')
    } else {
        false
    };
    ok.then(|| digits.parse::<i64>().ok().map(|y| sign * y))
        .flatten()
}

fn unit_factor(u: &str) -> Option<(u8, f64)> {
    Some(match u.trim().to_ascii_lowercase().as_str() {
        "mm" => (0, 0.001),
        "cm" => (0, 0.01),
        "dm" => (0, 0.1),
        "m" => (0, 1.0),
        "km" => (0, 1000.0),
        "mg" => (1, 0.000001),
        "g" => (1, 0.001),
        "kg" => (1, 1.0),
        _ => return None,
    })
}

fn convert(v: f64, from: &str, to: &str) -> Option<f64> {
    if from.trim().eq_ignore_ascii_case(to.trim()) {
        return Some(v);
    }
    let (qa, fa) = unit_factor(from)?;
    let (qb, fb) = unit_factor(to)?;
    (qa == qb).then_some(v * fa / fb)
}

/// Nonzero winding number; points on the boundary count as inside.
fn winding_inside(p: (f64, f64), poly: &[(f64, f64)]) -> bool {
    let (y, x) = p;
    let n = poly.len();
    let mut wn = 0i32;
    for i in 0..n {
        let (y1, x1) = poly[i];
        let (y2, x2) = poly[(i + 1) % n];
        let cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1);
        if cross == 0.0 && x >= x1.min(x2) && x <= x1.max(x2) && y >= y1.min(y2) && y <= y1.max(y2)
        {
            return true;
        }
        if y1 <= y {
            if y2 > y && cross > 0.0 {
                wn += 1;
            }
        } else if y2 <= y && cross < 0.0 {
            wn -= 1;
        }
    }
    wn != 0
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tri {
    Pass,
    Fail,
    Missing,
}

fn fold(verdicts: impl IntoIterator<Item = Option<bool>>) -> Tri {
    let mut seen_false = false;
    for v in verdicts {
        match v {
            Some(true) => return Tri::Pass,
            Some(false) => seen_false = true,
            None => {}
        }
    }
    if seen_false {
        Tri::Fail
    } else {
        Tri::Missing
    }
}

fn owners(g: &Graph, pattern_iri: &str, anchor: &Term) -> Vec<Term> {
    match pattern_iri {
        p if p == pattern::TIME_INDEXED_TYPED_LOCATION => {
            g.subjects(prop::HAS_TIME_INDEXED_TYPED_LOCATION, anchor)
        }
        p if p == pattern::MEASUREMENT_COLLECTION => {
            g.subjects(prop::HAS_MEASUREMENT_COLLECTION, anchor)
        }
        _ => vec![anchor.clone()],
    }
}

/// Terms a text or category dimension takes for `anchor`.
fn text_values(g: &Graph, pattern_iri: &str, dim: &str, anchor: &Term) -> Vec<Term> {
    let mut out: Vec<Term> = match dim {
        "label" => owners(g, pattern_iri, anchor)
            .iter()
            .flat_map(|o| g.objects(o, RDFS_LABEL))
            .collect(),
        "author" => owners(g, pattern_iri, anchor)
            .iter()
            .flat_map(|o| g.objects(o, prop::AUTHOR))
            .collect(),
        "loctype" => g.objects(anchor, prop::HAS_LOCATION_TYPE),
        "place" => g
            .objects(anchor, prop::AT_LOCATION)
            .iter()
            .flat_map(|p| g.objects(p, RDFS_LABEL))
            .collect(),
        other => panic!("no text dimension {other}"),
    };
    out.sort();
    out.dedup();
    out
}

fn time_values(g: &Graph, anchor: &Term, predicate: &str) -> Vec<Term> {
    g.objects(anchor, prop::AT_TIME)
        .iter()
        .flat_map(|t| g.objects(t, predicate))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn place_numbers(g: &Graph, anchor: &Term, predicate: &str) -> Vec<f64> {
    g.objects(anchor, prop::AT_LOCATION)
        .iter()
        .flat_map(|p| g.objects(p, predicate))
        .collect::<BTreeSet<_>>()
        .iter()
        .filter_map(number)
        .collect()
}

fn oracle_outcome(g: &Graph, pattern_iri: &str, kind: Kind, filter: &Filter, anchor: &Term) -> Tri {
    match filter {
        Filter::Category { dimension, allowed } => fold(
            text_values(g, pattern_iri, dimension, anchor)
                .iter()
                .map(|t| Some(names(g, t, true).iter().any(|n| allowed.contains(n)))),
        ),
        Filter::TextContains { dimension, needle } => {
            let needle = needle.to_lowercase();
            fold(
                text_values(g, pattern_iri, dimension, anchor)
                    .iter()
                    .map(|t| {
                        Some(
                            names(g, t, false)
                                .iter()
                                .any(|n| n.to_lowercase().contains(&needle)),
                        )
                    }),
            )
        }
        Filter::NumericRange {
            dimension,
            min,
            max,
            unit,
        } => {
            let ok = |v: f64| min.is_none_or(|m| v >= m) && max.is_none_or(|m| v <= m);
            match (kind, dimension.as_str()) {
                (Kind::Integer, "components") => {
                    fold([Some(ok(g.objects(anchor, prop::HAS_PART).len() as f64))])
                }
                (Kind::Integer, "measures") => {
                    fold([Some(ok(g.objects(anchor, prop::HAS_MEMBER).len() as f64))])
                }
                (Kind::Decimal, measure) => {
                    let mut verdicts = Vec::new();
                    for m in g.objects(anchor, prop::HAS_MEMBER) {
                        let typed = g.objects(&m, prop::MEASUREMENT_TYPE).iter().any(|t| {
                            names(g, t, true)
                                .iter()
                                .any(|n| n.eq_ignore_ascii_case(measure))
                        });
                        if !typed {
                            continue;
                        }
                        let from = g.objects(&m, prop::UNIT).first().map(|u| match u {
                            Term::Literal(l) => l.lexical.clone(),
                            other => local(other.value()).to_owned(),
                        });
                        for v in g.objects(&m, prop::VALUE) {
                            let value = number(&v).and_then(|x| match (&from, unit) {
                                (Some(f), Some(t)) => convert(x, f, t),
                                _ => Some(x),
                            });
                            verdicts.push(value.map(ok));
                        }
                    }
                    fold(verdicts)
                }
                other => panic!("unexpected numeric dimension {other:?}", other = other.1),
            }
        }
        Filter::TimeInterval {
            dimension,
            start,
            end,
        } => {
            let lo = start.unwrap_or(i64::MIN);
            let hi = end.unwrap_or(i64::MAX);
            match dimension.as_str() {
                "start" | "end" => {
                    let p = if dimension == "start" {
                        prop::START_TIME
                    } else {
                        prop::END_TIME
                    };
                    fold(
                        time_values(g, anchor, p)
                            .iter()
                            .map(|t| year(t).map(|y| lo <= y && y <= hi)),
                    )
                }
                "time" => {
                    let s = time_values(g, anchor, prop::START_TIME)
                        .iter()
                        .filter_map(year)
                        .min();
                    let e = time_values(g, anchor, prop::END_TIME)
                        .iter()
                        .filter_map(year)
                        .max();
                    if s.is_none() && e.is_none() {
                        Tri::Missing
                    } else {
                        let overlap = s.unwrap_or(i64::MIN) <= hi && e.unwrap_or(i64::MAX) >= lo;
                        fold([Some(overlap)])
                    }
                }
                other => panic!("no time dimension {other}"),
            }
        }
        Filter::GeoPolygon { vertices, .. } => {
            let lats = place_numbers(g, anchor, prop::LAT);
            let lons = place_numbers(g, anchor, prop::LONG);
            fold(
                lats.iter()
                    .flat_map(|&a| lons.iter().map(move |&o| (a, o)))
                    .map(|p| Some(winding_inside(p, vertices))),
            )
        }
    }
}

fn oracle_excluded(g: &Graph, p: &PatternDims, fs: &FilterSet, anchor: &Term) -> bool {
    let outcomes: Vec<Tri> = fs
        .filters()
        .iter()
        .map(|f| {
            let kind = p.dims.iter().find(|(d, _)| *d == f.dimension()).unwrap().1;
            oracle_outcome(g, p.pattern, kind, f, anchor)
        })
        .collect();
    outcomes.contains(&Tri::Fail)
        || (fs.world() == WorldAssumption::Closed && outcomes.contains(&Tri::Missing))
}

fn emap_oracle(ctx: &Ctx) -> Outcome {
    let ds = &ctx.dataset;
    let dims = pattern_dims();
    let total_occurrences: usize = dims.iter().map(|p| ds.occurrences(p.pattern).len()).sum();
    ensure!(
        total_occurrences == 477,
        "fixture has {total_occurrences} occurrences"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut decisions = 0usize;
    let mut excluded_count = 0usize;
    for i in 0..1000 {
        let p = &dims[i % dims.len()];
        let fs = random_filter_set(&mut rng, p);
        let schema = ds.schema(p.pattern).map_err(|e| e.to_string())?;
        for occ in ds.occurrences(p.pattern) {
            let anchor = occ.anchor.as_ref().ok_or("occurrence without anchor")?;
            let lib = emap(schema, occ, &ds.data, &fs)
                .map_err(|e| e.to_string())?
                .is_none();
            let want = oracle_excluded(&ds.data, p, &fs, anchor);
            ensure!(
                lib == want,
                "set {i} ({}, {} world) on {}: library excluded={lib}, oracle={want}",
                fs.to_wire(),
                fs.world(),
                occ.instance
            );
            decisions += 1;
            excluded_count += usize::from(want);
        }
    }
    Ok(format!(
        "{decisions} decisions agree ({excluded_count} excluded)"
    ))
}

fn rowset(ds: &Dataset, pattern_iri: &str, fs: &FilterSet) -> BTreeSet<String> {
    ds.table(pattern_iri, fs, 0, usize::MAX)
        .unwrap()
        .rows
        .into_iter()
        .map(|r| r.instance)
        .collect()
}

fn world_monotonicity(ctx: &Ctx) -> Outcome {
    let ds = &ctx.dataset;
    let dims = pattern_dims();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = Vec::new();
    let mut extended = 0;
    for i in 0..1000 {
        let p = &dims[i % dims.len()];
        let fs = random_filter_set(&mut rng, p);
        let open = rowset(ds, p.pattern, &fs.with_world(WorldAssumption::Open));
        let closed = rowset(ds, p.pattern, &fs.with_world(WorldAssumption::Closed));
        if !closed.is_subset(&open) {
            violations.push(format!("closed ⊄ open for {}", fs.to_wire()));
        }
        let used: BTreeSet<&str> = fs.filters().iter().map(Filter::dimension).collect();
        let free: Vec<&(&str, Kind)> = p.dims.iter().filter(|(d, _)| !used.contains(d)).collect();
        if let Some((d, k)) = free.choose(&mut rng) {
            let more = fs
                .with_filter(random_filter(&mut rng, d, *k))
                .map_err(|e| e.to_string())?;
            extended += 1;
            if !rowset(ds, p.pattern, &more).is_subset(&rowset(ds, p.pattern, &fs)) {
                violations.push(format!(
                    "adding a filter grew {} -> {}",
                    fs.to_wire(),
                    more.to_wire()
                ));
            }
        }
    }
    ensure!(
        violations.is_empty(),
        "{} violations, first: {}",
        violations.len(),
        violations[0]
    );
    Ok(format!("1000 sets, {extended} extensions, 0 violations"))
}

// ---------------------------------------------------------------------------
// Exploratory search tasks through the CLI

fn exploratory_tasks(ctx: &Ctx) -> Outcome {
    let text =
        std::fs::read_to_string(ctx.dir.join(GROUND_TRUTH_FILE)).map_err(|e| e.to_string())?;
    let gt: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let queries = gt["queries"]
        .as_array()
        .ok_or("groundtruth has no queries")?;
    let names: BTreeSet<&str> = queries.iter().filter_map(|q| q["name"].as_str()).collect();
    for want in ["es1", "es2", "es3", "es4", "es5", "paris_1856"] {
        ensure!(names.contains(want), "groundtruth lacks {want}");
    }
    let mut report = Vec::new();
    for q in queries {
        let name = q["name"].as_str().unwrap();
        let mut args = vec![
            "explore",
            "-c",
            ctx.config(),
            q["pattern"].as_str().unwrap(),
        ];
        for f in q["filters"].as_str().unwrap().split(',') {
            args.extend(["--filter", f]);
        }
        args.extend(["--world", q["world"].as_str().unwrap(), "--count"]);
        let (code, out, err) = cli(&args);
        ensure!(code == 0, "{name}: exit {code}: {err}");
        let got: u64 = out
            .trim()
            .parse()
            .map_err(|_| format!("{name}: output {out:?}"))?;
        let expected = q["expected"].as_u64().unwrap();
        ensure!(
            got == expected,
            "{name}: explore printed {got}, groundtruth {expected}"
        );
        report.push(format!("{name}={got}"));
    }
    Ok(report.join(" "))
}

// ---------------------------------------------------------------------------
// Occurrences, matcher and parser

fn occurrence_round_trip(ctx: &Ctx) -> Outcome {
    let ds = &ctx.dataset;
    let mut report = Vec::new();
    for t in &ds.templates {
        let detected = detect_occurrences(&ds.data, t);
        let ann = annotate(&detected);
        let back = occurrences_of(&ds.data, &ann, &t.pattern).map_err(|e| e.to_string())?;
        let a: BTreeSet<(String, BTreeSet<Term>)> = detected
            .iter()
            .map(|o| (o.instance.clone(), o.members.clone()))
            .collect();
        let b: BTreeSet<(String, BTreeSet<Term>)> = back
            .iter()
            .map(|o| (o.instance.clone(), o.members.clone()))
            .collect();
        ensure!(!a.is_empty(), "{}: nothing detected", t.name);
        ensure!(
            a == b,
            "{}: {} detected vs {} read back differ",
            t.name,
            a.len(),
            b.len()
        );
        report.push(format!("{}={}", t.name, a.len()));
    }
    ensure!(
        report.len() == 3,
        "expected three templates, got {}",
        report.len()
    );
    Ok(report.join(" "))
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(0..=30);
    let triples = (0..n).map(|_| {
        let s = Term::iri(format!("http://e/n{}", rng.gen_range(0..6)));
        let p = Term::iri(format!("http://e/p{}", rng.gen_range(0..3)));
        let o = if rng.gen_bool(0.75) {
            Term::iri(format!("http://e/n{}", rng.gen_range(0..6)))
        } else {
            Term::string(format!("v{}", rng.gen_range(0..3)))
        };
        Triple::new(s, p, o)
    });
    Graph::from_triples(GraphPart::Data, triples)
}

fn random_position(
    rng: &mut ChaCha8Rng,
    constant: impl FnOnce(&mut ChaCha8Rng) -> Term,
) -> TermPattern {
    if rng.gen_bool(0.75) {
        TermPattern::var(["a", "b", "c"][rng.gen_range(0..3)])
    } else {
        TermPattern::Term(constant(rng))
    }
}

fn bgp_brute_force(g: &Graph, patterns: &[TriplePattern]) -> BTreeSet<BTreeMap<Variable, Term>> {
    let mut vars: Vec<Variable> = Vec::new();
    for tp in patterns {
        for pos in [&tp.subject, &tp.predicate, &tp.object] {
            if let TermPattern::Var(v) = pos {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
    }
    let terms: Vec<Term> = g
        .iter()
        .flat_map(|t| [t.subject, t.predicate, t.object])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = BTreeSet::new();
    let total = terms.len().pow(vars.len() as u32);
    for mut code in 0..total {
        let mut binding = BTreeMap::new();
        for v in &vars {
            binding.insert(v.clone(), terms[code % terms.len()].clone());
            code /= terms.len();
        }
        let resolve = |p: &TermPattern| match p {
            TermPattern::Term(t) => t.clone(),
            TermPattern::Var(v) => binding[v].clone(),
        };
        let all = patterns.iter().all(|tp| {
            Triple::try_new(
                resolve(&tp.subject),
                resolve(&tp.predicate),
                resolve(&tp.object),
            )
            .is_ok_and(|t| g.contains(&t))
        });
        if all {
            out.insert(binding);
        }
    }
    out
}

fn bgp_oracle(_: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut solutions, mut nonempty) = (0, 0);
    for i in 0..200 {
        let g = random_graph(&mut rng);
        let k = rng.gen_range(1..=3);
        let patterns: Vec<TriplePattern> = (0..k)
            .map(|_| {
                let s = random_position(&mut rng, |r| {
                    Term::iri(format!("http://e/n{}", r.gen_range(0..6)))
                });
                let p = random_position(&mut rng, |r| {
                    Term::iri(format!("http://e/p{}", r.gen_range(0..3)))
                });
                let o = random_position(&mut rng, |r| {
                    Term::iri(format!("http://e/n{}", r.gen_range(0..6)))
                });
                TriplePattern::new(s, p, o)
            })
            .collect();
        let expected = bgp_brute_force(&g, &patterns);
        let got: BTreeSet<_> = match_bgp(&g, &BasicGraphPattern::new(patterns))
            .solutions
            .into_iter()
            .collect();
        ensure!(
            got == expected,
            "graph {i}: {} solutions vs brute force {}",
            got.len(),
            expected.len()
        );
        solutions += expected.len();
        nonempty += usize::from(!expected.is_empty());
    }
    Ok(format!(
        "200 graphs, {solutions} solutions, {nonempty} non-empty results"
    ))
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (px, py) = (p.1, p.0);
    let (ax, ay) = (a.1, a.0);
    let (bx, by) = (b.1, b.0);
    let (dx, dy) = (bx - ax, by - ay);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((px - ax) * dx + (py - ay) * dy) / len2).clamp(0.0, 1.0)
    };
    ((px - ax - t * dx).powi(2) + (py - ay - t * dy).powi(2)).sqrt()
}

fn point_in_polygon_oracle(_: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut agree, mut compared, mut skipped) = (0usize, 0usize, 0usize);
    while compared + skipped < 25_000 {
        let poly = match rng.gen_range(0..3) {
            0 => {
                let centre = (rng.gen_range(-60.0..60.0), rng.gen_range(-170.0..170.0));
                star_polygon(&mut rng, centre, 20.0)
            }
            1 => {
                let (lat, lon) = (rng.gen_range(-80.0..70.0), rng.gen_range(-170.0..160.0));
                let (h, w) = (rng.gen_range(0.01..10.0), rng.gen_range(0.01..10.0));
                vec![
                    (lat, lon),
                    (lat, lon + w),
                    (lat + h, lon + w),
                    (lat + h, lon),
                ]
            }
            _ => {
                let centre = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                star_polygon(&mut rng, centre, 0.5)
            }
        };
        let (min_lat, max_lat) = poly
            .iter()
            .fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.0), b.max(p.0)));
        let (min_lon, max_lon) = poly
            .iter()
            .fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
        let point = if rng.gen_bool(0.05) {
            poly[rng.gen_range(0..poly.len())]
        } else {
            (
                rng.gen_range(min_lat - 1.0..max_lat + 1.0),
                rng.gen_range(min_lon - 1.0..max_lon + 1.0),
            )
        };
        let n = poly.len();
        let near_edge = (0..n).any(|i| segment_distance(point, poly[i], poly[(i + 1) % n]) < 1e-12);
        if near_edge {
            skipped += 1;
            continue;
        }
        let Ok(lib) = odpkit_core::explore::point_in_polygon(point, &poly) else {
            skipped += 1;
            continue;
        };
        compared += 1;
        agree += usize::from(lib == winding_inside(point, &poly));
    }
    let rate = agree as f64 / compared as f64;
    ensure!(rate.ge(&0.999), "agreement {rate:.5} over {compared} pairs");
    Ok(format!(
        "{agree}/{compared} agree ({:.3}%), {skipped} edge-proximate skipped",
        rate * 100.0
    ))
}

fn random_literal(rng: &mut ChaCha8Rng) -> Term {
    const CHARS: &[char] = &[
        'a', 'Z', ' ', '"', '\\', '\n', '\r', '\t', 'é', '漢', '😀', '<', '>', '\u{7}',
    ];
    let lexical: String = (0..rng.gen_range(0..8))
        .map(|_| *CHARS.choose(rng).unwrap())
        .collect();
    match rng.gen_range(0..3) {
        0 => Term::string(lexical),
        1 => Term::literal(Literal::lang(
            lexical,
            ["en", "it", "en-GB"][rng.gen_range(0..3)],
        )),
        _ => Term::typed(rng.gen_range(-50..50).to_string(), format!("{XSD}integer")),
    }
}

fn parser_round_trip(_: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut triples = 0;
    for i in 0..100 {
        let n = rng.gen_range(0..40);
        let g = Graph::from_triples(
            GraphPart::Data,
            (0..n).map(|_| {
                let s = Term::iri(format!("http://e/s{}#x", rng.gen_range(0..8)));
                let p = Term::iri(format!("http://e/p{}", rng.gen_range(0..4)));
                let o = if rng.gen_bool(0.5) {
                    random_literal(&mut rng)
                } else {
                    Term::iri(format!("urn:x:o{}", rng.gen_range(0..8)))
                };
                Triple::new(s, p, o)
            }),
        );
        let text = serialize_graph(&g, OutputFormat::NTriples);
        for format in [Format::NTriples, Format::TurtleSubset] {
            let (back, warnings) = parse_document_with_warnings(&text, format, None)
                .map_err(|e| format!("graph {i}: {e}"))?;
            ensure!(
                warnings.is_empty(),
                "graph {i}: {} warnings",
                warnings.len()
            );
            ensure!(back == g, "graph {i}: {format:?} reparse differs");
        }
        triples += g.len();
    }
    Ok(format!("100 graphs, {triples} triples, 0 warnings"))
}

// ---------------------------------------------------------------------------
// API contract

fn enc(s: &str) -> String {
    s.bytes()
        .map(|b| {
            if b.is_ascii_alphanumeric() || b"-._~".contains(&b) {
                (b as char).to_string()
            } else {
                format!("%{b:02X}")
            }
        })
        .collect()
}

fn validate(schema_name: &str, body: &Value) -> Result<(), String> {
    let schema: Value = serde_json::from_str(schemas()[schema_name]).map_err(|e| e.to_string())?;
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validator.iter_errors(body).map(|e| e.to_string()).collect();
    ensure!(errors.is_empty(), "{schema_name}: {}", errors.join("; "));
    Ok(())
}

fn api_contract(ctx: &Ctx) -> Outcome {
    let state = AppState::from_config(&ctx.config).map_err(|e| e.to_string())?;
    let app = router(state, None);
    let runtime = tokio::runtime::Builder::new_current_thread()
        .build()
        .unwrap();
    let get = |uri: String| -> (StatusCode, Value) {
        runtime.block_on(async {
            let resp = app
                .clone()
                .oneshot(Request::get(uri).body(Body::empty()).unwrap())
                .await
                .unwrap();
            let status = resp.status();
            let bytes = to_bytes(resp.into_body(), usize::MAX).await.unwrap();
            (
                status,
                serde_json::from_slice(&bytes).unwrap_or(Value::Null),
            )
        })
    };
    let ds = &ctx.dataset;
    let mut validated = 0;

    for threshold in ["", "?threshold=0", "?threshold=5", "?threshold=999999"] {
        let (status, body) = get(format!("/api/datasets/{}/summary{threshold}", ds.id()));
        ensure!(status == StatusCode::OK, "summary{threshold}: {status}");
        validate("summary.schema.json", &body)?;
        validated += 1;
    }
    for i in [1, 2, 17, 200] {
        let iri = format!("http://example.org/heritage/cp/{i:04}");
        let (status, body) = get(format!("/api/datasets/{}/resources/{}", ds.id(), enc(&iri)));
        ensure!(status == StatusCode::OK, "resource {iri}: {status}");
        validate("resource.schema.json", &body)?;
        validated += 1;
    }

    let dims = pattern_dims();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..50 {
        let p = &dims[i % dims.len()];
        let fs = random_filter_set(&mut rng, p);
        let offset = rng.gen_range(0..40);
        let limit = rng.gen_range(1..60);
        let uri = format!(
            "/api/datasets/{}/patterns/{}/instances?filters={}&world={}&offset={offset}&limit={limit}",
            ds.id(),
            p.name,
            enc(&fs.to_wire()),
            fs.world()
        );
        let (status, body) = get(uri);
        ensure!(
            status == StatusCode::OK,
            "request {i} ({}): {status} {body}",
            fs.to_wire()
        );
        validate("instances.schema.json", &body)?;
        validated += 1;
        let expected = ds
            .table(p.pattern, &fs, offset, limit)
            .map_err(|e| e.to_string())?;
        ensure!(
            body["total"].as_u64() == Some(expected.total as u64),
            "request {i} ({}): API total {} vs library {}",
            fs.to_wire(),
            body["total"],
            expected.total
        );
        let rows: Vec<&str> = body["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["instance"].as_str().unwrap())
            .collect();
        let lib_rows: Vec<&str> = expected.rows.iter().map(|r| r.instance.as_str()).collect();
        ensure!(rows == lib_rows, "request {i}: page rows differ");
    }
    Ok(format!(
        "{validated} responses schema-valid, 50/50 totals match"
    ))
}
