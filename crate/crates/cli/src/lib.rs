//! Command implementations behind the `odpkit` binary.
//!
//! Every command writes to caller-supplied streams and returns a process
//! exit code, so tests can drive the exact code path the binary runs.

use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use odpkit_core::dataset::{detect_all, load_config, Dataset, DatasetError};
use odpkit_core::explore::{display_literal, FilterSet, WorldAssumption};
use odpkit_core::fixture::{synth, FixtureSpec};
use odpkit_core::graph::{serialize_graph, OutputFormat, Term};
use odpkit_core::occurrence::annotate;
use odpkit_core::summary::NodeKind;
use odpkit_service::{AppState, DEFAULT_PORT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "odpkit",
    version,
    about = "Explore knowledge graphs through their ontology design patterns"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the synthetic heritage fixture with its ground truth.
    Synth(SynthArgs),
    /// Parse every configured file and report triple counts and warnings.
    Ingest(DatasetArgs),
    /// Detect pattern occurrences and write them as N-Triples annotations.
    Annotate(AnnotateArgs),
    /// Print the pattern-level summary graph.
    Summarize(SummarizeArgs),
    /// Print the filtered instance table of one pattern.
    Explore(ExploreArgs),
    /// Serve the JSON API (and optionally the web UI).
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
    /// JSON fixture spec; defaults are used when absent.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Overrides the spec's seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// Dataset configuration file.
    #[arg(long, short)]
    pub config: PathBuf,
    /// Dataset id; the first configured dataset when absent.
    #[arg(long, short)]
    pub dataset: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnnotateArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    /// Annotation output file.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    /// Minimum degree for key concepts; the dataset's configured value when absent.
    #[arg(long)]
    pub threshold: Option<usize>,
    /// Print the summary as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ExploreArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    /// Pattern IRI, template name or local name.
    pub pattern: String,
    /// Filter `dimension:operator:value`; repeatable.
    #[arg(long = "filter", short = 'f')]
    pub filters: Vec<String>,
    /// `open` or `closed`.
    #[arg(long, default_value = "open")]
    pub world: String,
    /// Print only the number of matching instances.
    #[arg(long)]
    pub count: bool,
    #[arg(long, default_value_t = 0)]
    pub offset: usize,
    #[arg(long, default_value_t = 50)]
    pub limit: usize,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Dataset configuration file.
    #[arg(long, short)]
    pub config: PathBuf,
    #[arg(long, env = "PORT", default_value_t = DEFAULT_PORT)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    /// Directory of static web UI assets served under `/ui/`.
    #[arg(long)]
    pub ui: Option<PathBuf>,
}

/// A failed command: message plus exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl ToString) -> Self {
        Self {
            code: EXIT_DATA,
            message: message.to_string(),
        }
    }
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        Self::data(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            // A closed stdout (e.g. piping into `head`) is not an error.
            return Self {
                code: EXIT_OK,
                message: String::new(),
            };
        }
        Self::data(e)
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(err, "error: {}", f.message);
            }
            f.code
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Synth(a) => synth_cmd(&a, out),
        Command::Ingest(a) => ingest_cmd(&a, out),
        Command::Annotate(a) => annotate_cmd(&a, out),
        Command::Summarize(a) => summarize_cmd(&a, out),
        Command::Explore(a) => explore_cmd(&a, out),
        Command::Serve(a) => serve_cmd(&a),
    }
}

fn load(args: &DatasetArgs) -> Result<Dataset, Failure> {
    let configs = load_config(&args.config)?;
    let config = match &args.dataset {
        Some(id) => configs.iter().find(|c| &c.id == id).ok_or_else(|| {
            Failure::usage(format!("no dataset {id:?} in {}", args.config.display()))
        })?,
        None => configs
            .first()
            .ok_or_else(|| Failure::data(format!("{} lists no datasets", args.config.display())))?,
    };
    Ok(Dataset::load(config)?)
}

pub fn synth_cmd(args: &SynthArgs, out: &mut dyn Write) -> CmdResult {
    let mut spec = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<FixtureSpec>(&text)
                .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?
        }
        None => FixtureSpec::default(),
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let fixture = synth(&spec, &args.out).map_err(Failure::data)?;
    writeln!(
        out,
        "wrote fixture (seed {}) to {}",
        spec.seed,
        args.out.display()
    )?;
    for q in &fixture.ground_truth.queries {
        writeln!(out, "{}: {}", q.name, q.expected)?;
    }
    Ok(())
}

pub fn ingest_cmd(args: &DatasetArgs, out: &mut dyn Write) -> CmdResult {
    let ds = load(args)?;
    let r = &ds.report;
    writeln!(out, "dataset {}", ds.id())?;
    writeln!(out, "ontology triples: {}", r.ontology_triples)?;
    writeln!(out, "data triples: {}", r.data_triples)?;
    writeln!(out, "annotation triples: {}", r.annotation_triples)?;
    writeln!(out, "warnings: {}", r.warnings.len())?;
    for w in &r.warnings {
        writeln!(
            out,
            "  {}:{}:{}: {}",
            w.file.display(),
            w.line,
            w.column,
            w.message
        )?;
    }
    Ok(())
}

pub fn annotate_cmd(args: &AnnotateArgs, out: &mut dyn Write) -> CmdResult {
    let ds = load(&args.dataset)?;
    let mut all = Vec::new();
    for (template, occs) in detect_all(&ds.data, &ds.templates) {
        writeln!(out, "{}: {}", template.name, occs.len())?;
        all.extend(occs);
    }
    let text = serialize_graph(&annotate(&all), OutputFormat::NTriples);
    write_file(&args.out, &text)
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    std::fs::write(path, text).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

pub fn summarize_cmd(args: &SummarizeArgs, out: &mut dyn Write) -> CmdResult {
    let ds = load(&args.dataset)?;
    let summary = ds.summary(args.threshold);
    if args.json {
        serde_json::to_writer_pretty(&mut *out, &summary).map_err(Failure::data)?;
        writeln!(out)?;
        return Ok(());
    }
    let rows: Vec<[String; 4]> = summary
        .nodes
        .iter()
        .map(|n| {
            let (kind, count) = match n.kind {
                NodeKind::Pattern => ("pattern", n.occurrences.unwrap_or(0)),
                NodeKind::KeyConcept => ("concept", n.importance.unwrap_or(0)),
            };
            [
                kind.to_owned(),
                n.label.clone(),
                count.to_string(),
                format!("{:.4}", n.size),
            ]
        })
        .collect();
    print_table(out, &["kind", "label", "count", "size"], &rows)?;
    if !summary.edges.is_empty() {
        writeln!(out)?;
        let label = |id: &str| {
            summary
                .nodes
                .iter()
                .find(|n| n.id == id)
                .map_or_else(|| id.to_owned(), |n| n.label.clone())
        };
        let edges: Vec<[String; 3]> = summary
            .edges
            .iter()
            .map(|e| [label(&e.source), e.label.clone(), label(&e.target)])
            .collect();
        print_table(out, &["source", "edge", "target"], &edges)?;
    }
    Ok(())
}

pub fn explore_cmd(args: &ExploreArgs, out: &mut dyn Write) -> CmdResult {
    let world: WorldAssumption = args.world.parse().map_err(|_| {
        Failure::usage(format!(
            "invalid world {:?} (expected open or closed)",
            args.world
        ))
    })?;
    if args.limit == 0 {
        return Err(Failure::usage("limit must be at least 1"));
    }
    let ds = load(&args.dataset)?;
    let pattern = ds
        .resolve_pattern(&args.pattern)
        .ok_or_else(|| Failure::usage(format!("unknown pattern {:?}", args.pattern)))?;
    let schema = ds
        .schema(&pattern)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let filters = FilterSet::parse(&args.filters.join(","), world, schema)
        .map_err(|e| Failure::usage(e.code()))?;
    let table = ds
        .table(&pattern, &filters, args.offset, args.limit)
        .map_err(|e| Failure::usage(e.code()))?;
    if args.count {
        writeln!(out, "{}", table.total)?;
        return Ok(());
    }
    let columns = schema.column_info();
    let mut header = vec!["instance"];
    header.extend(columns.iter().map(|c| c.key.as_str()));
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![r.instance.clone()];
            row.extend(r.cells.iter().map(|c| match c {
                Some(l) => display_literal(&Term::literal(l.clone()), &ds.data).lexical,
                None => "-".to_owned(),
            }));
            row
        })
        .collect();
    print_table(out, &header, &rows)?;
    writeln!(
        out,
        "{} of {} (offset {}, {world} world)",
        table.rows.len(),
        table.total,
        args.offset
    )?;
    Ok(())
}

pub fn serve_cmd(args: &ServeArgs) -> CmdResult {
    let state = AppState::from_config(&args.config)?;
    if let Some(ui) = &args.ui {
        if !ui.is_dir() {
            return Err(Failure::usage(format!(
                "{} is not a directory",
                ui.display()
            )));
        }
    }
    odpkit_service::serve_blocking(
        state,
        SocketAddr::new(args.host, args.port),
        args.ui.clone(),
    )?;
    Ok(())
}

fn print_table<R: AsRef<[String]>>(
    out: &mut dyn Write,
    header: &[&str],
    rows: &[R],
) -> std::io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row.as_ref()) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_owned()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for row in rows {
        writeln!(
            out,
            "{}",
            line(row.as_ref().iter().map(String::as_str).collect())
        )?;
    }
    Ok(())
}
