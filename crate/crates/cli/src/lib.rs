//! The `tgraph` command line: load tables, inspect graphs, run algorithms over
//! views and window sets, and serve graphs over GraphQL.
//!
//! Data goes to stdout (or `--output`); diagnostics go to stderr. Exit codes:
//! 0 success, 1 invalid flags, 2 load or I/O failure, 3 algorithm failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use temporal_graph::algorithms::{
    motifs_over_windows, run_over_windows, temporal_motifs, Algorithm, PageRankConfig, WindowedResult,
};
use temporal_graph::io::{
    load_edges, open_graph, write_graph_json, write_motif_csv, write_motif_json, write_result_csv,
    write_result_json, write_windowed_csv, write_windowed_json, write_windowed_motif_csv,
    write_windowed_motif_json, Column, EdgeTableSpec, IoError, LayerSource, LoadReport, TimeFormat,
};
use temporal_graph::{DeletionSemantics, GraphView, NodeId, TemporalGraph, Time, WindowSet};
use temporal_graph_service::{Limits, ServerConfig};

#[derive(Parser, Debug)]
#[command(name = "tgraph", version, about = "Temporal property-graph toolkit")]
pub struct Cli {
    /// Graph file: a graph document (.json) or an edge table (.csv).
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write data here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, env = "TG_LOG", default_value = "warn")]
    log_level: log::LevelFilter,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load an edge table and write it as a graph document.
    Load(LoadArgs),
    /// Print node and edge counts and time bounds.
    Stats(ViewArgs),
    /// Run an algorithm on a view, optionally over a window set.
    Run(RunArgs),
    /// Serve every graph file in a directory over GraphQL.
    Serve(ServeArgs),
}

#[derive(Args, Debug)]
struct LoadArgs {
    /// Delimited edge table.
    input: PathBuf,
    #[arg(long, default_value = "src")]
    source: String,
    #[arg(long, default_value = "dst")]
    target: String,
    #[arg(long, default_value = "time")]
    time: String,
    #[arg(long, default_value = "epoch_millis")]
    time_format: TimeFormat,
    /// Column holding each row's layer.
    #[arg(long, conflicts_with = "layer")]
    layer_column: Option<String>,
    /// Put every row on this layer.
    #[arg(long)]
    layer: Option<String>,
    /// Property column as `name:type` (int, float, str, bool); repeatable.
    #[arg(long = "property", value_parser = parse_property)]
    properties: Vec<(String, temporal_graph::PropType)>,
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: u8,
    /// The table has no header row; columns are then given by index.
    #[arg(long)]
    no_header: bool,
    /// Abort on the first bad row.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug, Clone)]
struct ViewArgs {
    /// Restrict to `start:end` (half-open).
    #[arg(long, value_parser = parse_window)]
    window: Option<(Time, Time)>,
    /// Comma-separated layer names.
    #[arg(long, value_delimiter = ',')]
    layers: Option<Vec<String>>,
    /// Comma-separated node ids, or a file with one id per line.
    #[arg(long)]
    nodes: Option<String>,
    /// Deletion semantics: `event` or `persistent`.
    #[arg(long, default_value = "event")]
    semantics: DeletionSemantics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgorithmName {
    Pagerank,
    Degree,
    Motifs,
    Reachability,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum)]
    algorithm: AlgorithmName,
    #[command(flatten)]
    view: ViewArgs,
    /// Rolling windows `size[:step]`; the step defaults to the size.
    #[arg(long, value_parser = parse_rolling, conflicts_with_all = ["window", "expanding"])]
    rolling: Option<(Time, Option<Time>)>,
    /// Expanding windows growing by `step`.
    #[arg(long, conflicts_with = "window")]
    expanding: Option<Time>,
    /// Motif time bound.
    #[arg(long)]
    delta: Option<Time>,
    /// Reachability seeds, comma-separated.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<String>>,
    /// Reachability start time; defaults to the earliest event.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<Time>,
    /// Longest path, in edges, that reachability follows.
    #[arg(long)]
    max_hops: Option<usize>,
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    #[arg(long, default_value_t = 1e-7)]
    tolerance: f64,
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
    /// Emit only the k highest-ranked nodes as `rank,node,<value>`.
    #[arg(long, conflicts_with_all = ["rolling", "expanding"])]
    top_k: Option<usize>,
    /// Keep only these nodes in the output: comma-separated ids, or a file of
    /// ids (its `node` column if the header has one, else the first column).
    #[arg(long)]
    select: Option<String>,
}

#[derive(Args, Debug)]
struct ServeArgs {
    /// Directory of graph files to serve.
    #[arg(long, default_value = ".")]
    graph_dir: PathBuf,
    #[arg(long, default_value = temporal_graph_service::DEFAULT_BIND)]
    bind: SocketAddr,
    #[arg(long, default_value_t = 1000)]
    max_page_size: usize,
    /// Seconds before an algorithm request is abandoned.
    #[arg(long, default_value_t = 30)]
    algorithm_timeout: u64,
}

/// A failed invocation: message for stderr and the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }

    fn load(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn algorithm(message: impl ToString) -> Self {
        Failure {
            code: 3,
            message: message.to_string(),
        }
    }
}

fn parse_window(s: &str) -> Result<(Time, Time), String> {
    let (a, b) = s.split_once(':').ok_or("expected start:end")?;
    let a: Time = a.trim().parse().map_err(|e| format!("bad start: {e}"))?;
    let b: Time = b.trim().parse().map_err(|e| format!("bad end: {e}"))?;
    if a >= b {
        return Err(format!("start must precede end (got {a}:{b})"));
    }
    Ok((a, b))
}

fn parse_rolling(s: &str) -> Result<(Time, Option<Time>), String> {
    let (size, step) = match s.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let size: Time = size.trim().parse().map_err(|e| format!("bad size: {e}"))?;
    let step = step
        .map(|b| b.trim().parse::<Time>().map_err(|e| format!("bad step: {e}")))
        .transpose()?;
    if size <= 0 || step.is_some_and(|s| s <= 0) {
        return Err("window size and step must be positive".into());
    }
    Ok((size, step))
}

fn parse_property(s: &str) -> Result<(String, temporal_graph::PropType), String> {
    let (name, ty) = s.rsplit_once(':').ok_or("expected name:type")?;
    Ok((name.to_owned(), ty.parse()?))
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s {
        "\\t" | "tab" => Ok(b'\t'),
        _ if s.len() == 1 => Ok(s.as_bytes()[0]),
        _ => Err("delimiter must be a single byte".into()),
    }
}

/// Ids from a comma-separated list, or from the first column of a file.
fn id_list(spec: &str) -> Result<Vec<NodeId>, Failure> {
    let path = Path::new(spec);
    if !path.is_file() {
        return Ok(spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(NodeId::parse)
            .collect());
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure::load(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines().peekable();
    let mut col = 0;
    if let Some(header) = lines.peek() {
        if let Some(i) = header.split(',').position(|c| c.trim() == "node") {
            col = i;
            lines.next();
        }
    }
    Ok(lines
        .filter_map(|l| l.split(',').nth(col))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(NodeId::parse)
        .collect())
}

fn column(name: &str, no_header: bool) -> Column {
    match name.parse::<usize>() {
        Ok(i) if no_header => Column::Index(i),
        _ => Column::Name(name.to_owned()),
    }
}

fn report_line(report: &LoadReport) -> String {
    let n = report.errors.len();
    format!(
        "loaded {} edges, {} {}",
        report.valid_rows,
        n,
        if n == 1 { "error" } else { "errors" }
    )
}

fn log_row_errors(report: &LoadReport) {
    for e in report.errors.iter().take(20) {
        log::warn!("row {}: {}", e.row, e.message);
    }
}

fn load_failure(e: IoError) -> Failure {
    if let IoError::NoValidRows { report } = &e {
        log_row_errors(report);
        return Failure::load(format!("{}; no valid rows", report_line(report)));
    }
    Failure::load(e)
}

struct Session {
    format: Format,
    output: Option<PathBuf>,
}

impl Session {
    fn write(&self, f: impl FnOnce(&mut dyn Write) -> Result<(), IoError>) -> Result<(), Failure> {
        let result = match &self.output {
            Some(path) => {
                let file = File::create(path).map_err(|e| Failure::load(format!("{}: {e}", path.display())))?;
                let mut w = BufWriter::new(file);
                f(&mut w).and_then(|_| w.flush().map_err(IoError::from))
            }
            None => {
                let stdout = io::stdout();
                let mut w = BufWriter::new(stdout.lock());
                f(&mut w).and_then(|_| w.flush().map_err(IoError::from))
            }
        };
        result.map_err(Failure::load)
    }
}

fn open(graph: Option<&Path>) -> Result<Arc<TemporalGraph>, Failure> {
    let path = graph.ok_or_else(|| Failure::usage("--graph is required"))?;
    let (graph, report) = open_graph(path).map_err(load_failure)?;
    if let Some(report) = report {
        log_row_errors(&report);
        eprintln!("{}", report_line(&report));
    }
    Ok(Arc::new(graph))
}

fn build_view(graph: &Arc<TemporalGraph>, args: &ViewArgs) -> Result<GraphView, Failure> {
    let mut view = graph.view().with_semantics(args.semantics);
    if let Some((a, b)) = args.window {
        view = view.window(a, b).map_err(Failure::usage)?;
    }
    if let Some(layers) = &args.layers {
        view = view.layers(layers).map_err(Failure::usage)?;
    }
    if let Some(nodes) = &args.nodes {
        view = view.subgraph(id_list(nodes)?);
    }
    Ok(view)
}

fn cmd_load(args: &LoadArgs, session: &Session) -> Result<(), Failure> {
    let mut spec = EdgeTableSpec::new(
        &args.input,
        column(&args.source, args.no_header),
        column(&args.target, args.no_header),
        column(&args.time, args.no_header),
    )
    .time_format(args.time_format)
    .delimiter(args.delimiter)
    .has_header(!args.no_header)
    .strict(args.strict);
    if let Some(name) = &args.layer_column {
        spec = spec.layer(LayerSource::Column(column(name, args.no_header)));
    } else if let Some(layer) = &args.layer {
        spec = spec.layer(LayerSource::Fixed(layer.clone()));
    }
    for (name, ty) in &args.properties {
        spec = spec.property(column(name, args.no_header), *ty);
    }
    let (graph, report) = load_edges(&spec).map_err(load_failure)?;
    log_row_errors(&report);
    eprintln!("{}", report_line(&report));
    session.write(|w| write_graph_json(&graph, w))
}

fn cmd_stats(graph: Option<&Path>, args: &ViewArgs, session: &Session) -> Result<(), Failure> {
    let graph = open(graph)?;
    let view = build_view(&graph, args)?;
    let (nodes, edges) = (view.count_nodes(), view.count_edges());
    let earliest = view.earliest_time().ok();
    let latest = view.latest_time().ok();
    if earliest.is_none() {
        eprintln!("no events");
    }
    let layers = match view.layer_names() {
        Some(names) => names.into_iter().map(str::to_owned).collect(),
        None => graph.layer_names().to_vec(),
    };
    match session.format {
        Format::Json => session.write(|w| {
            let doc = serde_json::json!({
                "nodes": nodes,
                "edges": edges,
                "earliest_time": earliest,
                "latest_time": latest,
                "layers": layers,
            });
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            w.write_all(b"\n")?;
            Ok(())
        }),
        Format::Csv => session.write(|w| {
            let cell = |t: Option<Time>| t.map(|t| t.to_string()).unwrap_or_default();
            writeln!(w, "nodes,edges,earliest_time,latest_time,layers")?;
            writeln!(
                w,
                "{nodes},{edges},{},{},{}",
                cell(earliest),
                cell(latest),
                layers.join(";")
            )?;
            Ok(())
        }),
    }
}

fn window_set(view: &GraphView, args: &RunArgs) -> Result<Option<WindowSet>, Failure> {
    if let Some((size, step)) = args.rolling {
        return view.rolling(size, step).map(Some).map_err(Failure::usage);
    }
    if let Some(step) = args.expanding {
        return view.expanding(step).map(Some).map_err(Failure::usage);
    }
    Ok(None)
}

fn keep_selected(table: &mut WindowedResult, select: &[NodeId]) {
    table.rows.retain(|(node, _)| select.contains(node));
}

fn cmd_run(graph: Option<&Path>, args: &RunArgs, session: &Session) -> Result<(), Failure> {
    let graph = open(graph)?;
    let view = build_view(&graph, &args.view)?;
    let windows = window_set(&view, args)?;
    let select = args.select.as_deref().map(id_list).transpose()?;

    if args.algorithm == AlgorithmName::Motifs {
        let delta = args
            .delta
            .ok_or_else(|| Failure::usage("--delta is required for motifs"))?;
        if delta <= 0 {
            return Err(Failure::usage("--delta must be positive"));
        }
        return match windows {
            None => {
                let m = temporal_motifs(&view, delta).map_err(Failure::algorithm)?;
                session.write(|w| match session.format {
                    Format::Csv => write_motif_csv(&m, w),
                    Format::Json => write_motif_json(&m, w),
                })
            }
            Some(ws) => {
                let ms = motifs_over_windows(&view, &ws, delta).map_err(Failure::algorithm)?;
                session.write(|w| match session.format {
                    Format::Csv => write_windowed_motif_csv(&ms, w),
                    Format::Json => write_windowed_motif_json(&ms, w),
                })
            }
        };
    }

    let algorithm = match args.algorithm {
        AlgorithmName::Pagerank => {
            let config = PageRankConfig {
                damping: args.damping,
                tolerance: args.tolerance,
                max_iterations: args.max_iterations,
            };
            config.validate().map_err(Failure::usage)?;
            Algorithm::PageRank(config)
        }
        AlgorithmName::Degree => Algorithm::Degree,
        AlgorithmName::Reachability => {
            let seeds = args
                .seeds
                .as_ref()
                .ok_or_else(|| Failure::usage("--seeds is required for reachability"))?;
            let start = match args.start {
                Some(t) => t,
                None => view.earliest_time().map_err(Failure::algorithm)?,
            };
            Algorithm::Reachability {
                seeds: seeds.iter().map(|s| NodeId::parse(s)).collect(),
                start,
                max_hops: args.max_hops,
            }
        }
        AlgorithmName::Motifs => unreachable!(),
    };

    if let Some(ws) = windows {
        let mut table = run_over_windows(&view, &ws, &algorithm);
        for (w, e) in table.windows.iter().zip(&table.errors) {
            if let Some(e) = e {
                log::info!("window {w}: {e}");
            }
        }
        if let Some(select) = &select {
            keep_selected(&mut table, select);
        }
        return session.write(|w| match session.format {
            Format::Csv => write_windowed_csv(&table, w),
            Format::Json => write_windowed_json(&table, w),
        });
    }

    let mut result = algorithm.run(&view).map_err(Failure::algorithm)?;
    if let Some(select) = &select {
        result.rows.retain(|r| select.contains(&r.node));
    }
    if let Some(k) = args.top_k {
        let top = result.top_k(k).map_err(Failure::usage)?;
        let column = result.primary_column().to_owned();
        return session.write(|w| match session.format {
            Format::Csv => {
                writeln!(w, "rank,node,{column}")?;
                for (i, (node, v)) in top.iter().enumerate() {
                    let v = serde_json::to_string(v)?;
                    writeln!(w, "{},{},{}", i + 1, csv_field(&node.to_string()), v)?;
                }
                Ok(())
            }
            Format::Json => {
                let rows: Vec<_> = top
                    .iter()
                    .enumerate()
                    .map(|(i, (node, v))| serde_json::json!({"rank": i + 1, "node": node, column.as_str(): v}))
                    .collect();
                serde_json::to_writer_pretty(&mut *w, &rows)?;
                w.write_all(b"\n")?;
                Ok(())
            }
        });
    }
    session.write(|w| match session.format {
        Format::Csv => write_result_csv(&result, w),
        Format::Json => write_result_json(&result, w),
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn cmd_serve(args: &ServeArgs) -> Result<(), Failure> {
    let config = ServerConfig {
        bind: args.bind,
        graph_dir: args.graph_dir.clone(),
        limits: Limits {
            max_page_size: args.max_page_size,
            algorithm_timeout: Duration::from_secs(args.algorithm_timeout),
        },
    };
    config.validate().map_err(Failure::usage)?;
    let runtime = tokio::runtime::Runtime::new().map_err(Failure::load)?;
    runtime
        .block_on(temporal_graph_service::serve(config))
        .map_err(Failure::load)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let _ = env_logger::Builder::new()
        .filter_level(cli.log_level)
        .format_timestamp(None)
        .try_init();
    let session = Session {
        format: cli.format,
        output: cli.output.clone(),
    };
    let graph = cli.graph.as_deref();
    let outcome = match &cli.command {
        Command::Load(args) => cmd_load(args, &session),
        Command::Stats(args) => cmd_stats(graph, args, &session),
        Command::Run(args) => cmd_run(graph, args, &session),
        Command::Serve(args) => cmd_serve(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
