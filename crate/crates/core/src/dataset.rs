//! Dataset configuration and the sealed, loaded dataset that the CLI and
//! the HTTP service read from.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::explore::{
    build_table, table_schema, ExploreError, FilterSet, SchemaRegistry, Table, TableSchema,
};
use crate::frames::{mosaic, vmap, FrameError, FrameRegistry, ResourceView, VisualFrame};
use crate::graph::{
    local_name, parse_document_with_warnings, Format, Graph, GraphPart, ParseError, Term,
};
use crate::occurrence::{
    annotate, annotated_instances, detect_occurrences, infer_anchor, occurrences_of,
    parse_templates, Occurrence, OccurrenceError, PatternTemplate, TemplateError,
};
use crate::opla::{load_registry, PatternRegistry, RegistryError};
use crate::summary::{build_summary, SummaryGraph};

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("duplicate dataset id {0:?}")]
    DuplicateId(String),
    #[error("{path}: unsupported file extension (expected .nt or .ttl)")]
    UnknownFormat { path: PathBuf },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {source}")]
    Template {
        path: PathBuf,
        #[source]
        source: TemplateError,
    },
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Occurrence(#[from] OccurrenceError),
}

/// One dataset entry of the configuration file. Relative paths are
/// resolved against the configuration file's directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub id: String,
    #[serde(default)]
    pub ontology: Vec<PathBuf>,
    #[serde(default)]
    pub data: Vec<PathBuf>,
    /// When empty, occurrences are detected from the templates at load time.
    #[serde(default)]
    pub annotations: Vec<PathBuf>,
    pub templates: PathBuf,
    #[serde(default)]
    pub threshold: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub datasets: Vec<DatasetConfig>,
}

/// Reads a configuration file, resolving paths and checking id uniqueness.
pub fn load_config(path: &Path) -> Result<Vec<DatasetConfig>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_owned(),
        source,
    })?;
    let file: ConfigFile = serde_json::from_str(&text).map_err(|e| DatasetError::Config {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    let dir = path.parent().unwrap_or(Path::new(""));
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mut d in file.datasets {
        if !seen.insert(d.id.clone()) {
            return Err(DatasetError::DuplicateId(d.id));
        }
        for list in [&mut d.ontology, &mut d.data, &mut d.annotations] {
            for p in list.iter_mut() {
                *p = dir.join(&*p);
            }
        }
        d.templates = dir.join(&d.templates);
        out.push(d);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileWarning {
    pub file: PathBuf,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IngestReport {
    pub ontology_triples: usize,
    pub data_triples: usize,
    pub annotation_triples: usize,
    pub warnings: Vec<FileWarning>,
}

fn read(path: &Path) -> Result<String, DatasetError> {
    std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Parses and merges files into one graph of the given part. Blank nodes
/// are skolemized per file.
pub fn load_graph(
    part: GraphPart,
    files: &[PathBuf],
    warnings: &mut Vec<FileWarning>,
) -> Result<Graph, DatasetError> {
    let mut graph = Graph::new(part);
    for path in files {
        let format = Format::from_path(path)
            .ok_or_else(|| DatasetError::UnknownFormat { path: path.clone() })?;
        let text = read(path)?;
        let base = std::path::absolute(path)
            .ok()
            .and_then(|abs| url::Url::from_file_path(abs).ok())
            .map(String::from);
        let (g, ws) =
            parse_document_with_warnings(&text, format, base.as_deref()).map_err(|source| {
                DatasetError::Parse {
                    path: path.clone(),
                    source,
                }
            })?;
        warnings.extend(ws.into_iter().map(|w| FileWarning {
            file: path.clone(),
            line: w.line,
            column: w.column,
            message: w.message,
        }));
        let doc_id = path.file_name().and_then(|n| n.to_str()).unwrap_or("doc");
        graph.extend(g.skolemize(doc_id).iter());
    }
    Ok(graph)
}

pub fn load_templates(path: &Path) -> Result<Vec<PatternTemplate>, DatasetError> {
    parse_templates(&read(path)?).map_err(|source| DatasetError::Template {
        path: path.to_owned(),
        source,
    })
}

/// Runs every template over `data`, in template order.
pub fn detect_all<'a>(
    data: &Graph,
    templates: &'a [PatternTemplate],
) -> Vec<(&'a PatternTemplate, Vec<Occurrence>)> {
    templates
        .iter()
        .map(|t| (t, detect_occurrences(data, t)))
        .collect()
}

/// A loaded dataset. It is never mutated after [`Dataset::load`], so it can
/// be shared across threads behind an `Arc`.
#[derive(Debug)]
pub struct Dataset {
    pub config: DatasetConfig,
    pub ontology: Graph,
    pub data: Graph,
    pub annotations: Graph,
    pub registry: PatternRegistry,
    pub templates: Vec<PatternTemplate>,
    pub schemas: SchemaRegistry,
    pub frames: FrameRegistry,
    pub report: IngestReport,
    occurrences: BTreeMap<String, Vec<Occurrence>>,
    by_instance: BTreeMap<String, (String, usize)>,
}

impl Dataset {
    pub fn load(config: &DatasetConfig) -> Result<Self, DatasetError> {
        let mut warnings = Vec::new();
        let ontology = load_graph(GraphPart::Ontology, &config.ontology, &mut warnings)?;
        let data = load_graph(GraphPart::Data, &config.data, &mut warnings)?;
        let templates = load_templates(&config.templates)?;
        let registry = load_registry(&ontology)?;
        let mut occurrences: BTreeMap<String, Vec<Occurrence>> = BTreeMap::new();
        let annotations = if config.annotations.is_empty() {
            let mut all = Vec::new();
            for (t, occs) in detect_all(&data, &templates) {
                all.extend(occs.iter().cloned());
                occurrences
                    .entry(t.pattern.clone())
                    .or_default()
                    .extend(occs);
            }
            annotate(&all)
        } else {
            let annotations =
                load_graph(GraphPart::Annotation, &config.annotations, &mut warnings)?;
            let patterns: std::collections::BTreeSet<String> =
                annotated_instances(&annotations)?.into_values().collect();
            for p in patterns {
                let template = templates.iter().find(|t| t.pattern == p);
                let mut occs = occurrences_of(&data, &annotations, &p)?;
                if let Some(t) = template {
                    for o in &mut occs {
                        o.anchor = infer_anchor(t, o, &data);
                    }
                }
                occurrences.insert(p, occs);
            }
            annotations
        };
        let mut by_instance = BTreeMap::new();
        for (p, occs) in occurrences.iter_mut() {
            occs.sort_by(|a, b| a.instance.cmp(&b.instance));
            for (i, o) in occs.iter().enumerate() {
                by_instance.insert(o.instance.clone(), (p.clone(), i));
            }
        }
        let report = IngestReport {
            ontology_triples: ontology.len(),
            data_triples: data.len(),
            annotation_triples: annotations.len(),
            warnings,
        };
        Ok(Self {
            config: config.clone(),
            ontology,
            data,
            annotations,
            registry,
            templates,
            schemas: SchemaRegistry::builtin(),
            frames: FrameRegistry::builtin(),
            report,
            occurrences,
            by_instance,
        })
    }

    pub fn id(&self) -> &str {
        &self.config.id
    }

    pub fn triple_count(&self) -> usize {
        self.ontology.len() + self.data.len() + self.annotations.len()
    }

    pub fn pattern_count(&self) -> usize {
        self.registry.len()
    }

    /// Occurrences per pattern IRI.
    pub fn pattern_counts(&self) -> BTreeMap<String, usize> {
        self.occurrences
            .iter()
            .map(|(p, o)| (p.clone(), o.len()))
            .collect()
    }

    pub fn summary(&self, threshold: Option<usize>) -> SummaryGraph {
        build_summary(
            &self.ontology,
            &self.registry,
            &self.pattern_counts(),
            threshold.unwrap_or(self.config.threshold),
        )
    }

    /// Resolves a pattern given as an IRI, a template name, or a local name.
    pub fn resolve_pattern(&self, id: &str) -> Option<String> {
        let known = |iri: &str| {
            self.registry.contains(iri)
                || self.occurrences.contains_key(iri)
                || self.schemas.get(iri).is_some()
        };
        if known(id) {
            return Some(id.to_owned());
        }
        if let Some(t) = self.templates.iter().find(|t| t.name == id) {
            return Some(t.pattern.clone());
        }
        self.registry
            .iter()
            .map(|p| p.id.as_str())
            .chain(self.occurrences.keys().map(String::as_str))
            .find(|iri| local_name(iri).eq_ignore_ascii_case(id))
            .map(str::to_owned)
    }

    pub fn occurrences(&self, pattern: &str) -> &[Occurrence] {
        self.occurrences.get(pattern).map_or(&[], Vec::as_slice)
    }

    pub fn instance(&self, iri: &str) -> Option<&Occurrence> {
        let (p, i) = self.by_instance.get(iri)?;
        self.occurrences.get(p).and_then(|o| o.get(*i))
    }

    pub fn schema(&self, pattern: &str) -> Result<&TableSchema, ExploreError> {
        table_schema(&self.schemas, pattern)
    }

    pub fn table(
        &self,
        pattern: &str,
        filters: &FilterSet,
        offset: usize,
        limit: usize,
    ) -> Result<Table, ExploreError> {
        let schema = self.schema(pattern)?;
        build_table(
            schema,
            self.occurrences(pattern),
            &self.data,
            filters,
            offset,
            limit,
        )
    }

    /// The frame of a pattern instance, or `None` if the IRI is not one.
    pub fn frame(&self, instance: &str) -> Option<Result<VisualFrame, FrameError>> {
        self.instance(instance)
            .map(|o| vmap(&self.frames, o, &self.data))
    }

    pub fn resource(&self, iri: &str) -> Result<ResourceView, FrameError> {
        mosaic(&Term::iri(iri), &self.data, &self.annotations, &self.frames)
    }
}
