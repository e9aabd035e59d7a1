use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::IoError;
use crate::store::{NodeId, PropType, PropValue, TemporalGraph, Time};

/// A column addressed by header name or zero-based index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Column {
    Name(String),
    Index(usize),
}

impl From<&str> for Column {
    fn from(s: &str) -> Self {
        Column::Name(s.to_owned())
    }
}

impl From<String> for Column {
    fn from(s: String) -> Self {
        Column::Name(s)
    }
}

impl From<usize> for Column {
    fn from(i: usize) -> Self {
        Column::Index(i)
    }
}

impl FromStr for Column {
    type Err = std::convert::Infallible;

    /// Bare integers are indices; anything else is a header name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => Column::Index(i),
            Err(_) => Column::Name(s.to_owned()),
        })
    }
}

/// How the time column is read. Integer formats are used as ticks unchanged;
/// RFC 3339 datetimes become epoch milliseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TimeFormat {
    EpochSeconds,
    #[default]
    EpochMillis,
    Rfc3339,
}

impl TimeFormat {
    pub fn parse(self, raw: &str) -> Result<Time, String> {
        let raw = raw.trim();
        match self {
            TimeFormat::EpochSeconds | TimeFormat::EpochMillis => raw
                .parse::<i64>()
                .map_err(|e| format!("invalid time `{raw}`: {e}")),
            TimeFormat::Rfc3339 => chrono::DateTime::parse_from_rfc3339(raw)
                .map(|dt| dt.timestamp_millis())
                .map_err(|e| format!("invalid RFC 3339 time `{raw}`: {e}")),
        }
    }
}

impl FromStr for TimeFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "epoch_seconds" | "seconds" => Ok(TimeFormat::EpochSeconds),
            "epoch_millis" | "millis" => Ok(TimeFormat::EpochMillis),
            "rfc3339" => Ok(TimeFormat::Rfc3339),
            other => Err(format!("unknown time format `{other}`")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum LayerSource {
    #[default]
    Default,
    Fixed(String),
    Column(Column),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeTableSpec {
    pub path: PathBuf,
    pub delimiter: u8,
    pub has_header: bool,
    pub source: Column,
    pub target: Column,
    pub time: Column,
    pub time_format: TimeFormat,
    pub layer: LayerSource,
    pub properties: Vec<(Column, PropType)>,
    /// Treat every other header cell as a `name:type` property column.
    pub typed_header_props: bool,
    /// Fail on the first rejected row instead of reporting it.
    pub strict: bool,
}

impl EdgeTableSpec {
    pub fn new(
        path: impl Into<PathBuf>,
        source: impl Into<Column>,
        target: impl Into<Column>,
        time: impl Into<Column>,
    ) -> Self {
        EdgeTableSpec {
            path: path.into(),
            delimiter: b',',
            has_header: true,
            source: source.into(),
            target: target.into(),
            time: time.into(),
            time_format: TimeFormat::default(),
            layer: LayerSource::Default,
            properties: Vec::new(),
            typed_header_props: false,
            strict: false,
        }
    }

    /// Reads the layout written by the edge-list exporter.
    pub fn edge_list(path: impl Into<PathBuf>) -> Self {
        EdgeTableSpec {
            layer: LayerSource::Column("layer".into()),
            typed_header_props: true,
            ..EdgeTableSpec::new(path, "source", "target", "time")
        }
    }

    pub fn delimiter(mut self, delimiter: u8) -> Self {
        self.delimiter = delimiter;
        self
    }

    pub fn has_header(mut self, has_header: bool) -> Self {
        self.has_header = has_header;
        self
    }

    pub fn time_format(mut self, format: TimeFormat) -> Self {
        self.time_format = format;
        self
    }

    pub fn layer(mut self, layer: LayerSource) -> Self {
        self.layer = layer;
        self
    }

    pub fn property(mut self, column: impl Into<Column>, dtype: PropType) -> Self {
        self.properties.push((column.into(), dtype));
        self
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeTableSpec {
    pub path: PathBuf,
    pub delimiter: u8,
    pub has_header: bool,
    pub id: Column,
    pub time: Column,
    pub time_format: TimeFormat,
    pub properties: Vec<(Column, PropType)>,
    pub strict: bool,
}

impl NodeTableSpec {
    pub fn new(path: impl Into<PathBuf>, id: impl Into<Column>, time: impl Into<Column>) -> Self {
        NodeTableSpec {
            path: path.into(),
            delimiter: b',',
            has_header: true,
            id: id.into(),
            time: time.into(),
            time_format: TimeFormat::default(),
            properties: Vec::new(),
            strict: false,
        }
    }

    pub fn property(mut self, column: impl Into<Column>, dtype: PropType) -> Self {
        self.properties.push((column.into(), dtype));
        self
    }

    pub fn time_format(mut self, format: TimeFormat) -> Self {
        self.time_format = format;
        self
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowError {
    /// One-based line number in the input.
    pub row: u64,
    pub message: String,
}

/// Row accounting for one load: `valid_rows + errors.len() == total_rows`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub total_rows: usize,
    pub valid_rows: usize,
    pub errors: Vec<RowError>,
}

struct Header {
    names: Option<Vec<String>>,
}

impl Header {
    fn resolve(&self, column: &Column) -> Result<usize, IoError> {
        match (column, &self.names) {
            (Column::Index(i), Some(names)) if *i >= names.len() => {
                Err(IoError::UnknownColumn(i.to_string()))
            }
            (Column::Index(i), _) => Ok(*i),
            (Column::Name(name), Some(names)) => names
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| IoError::UnknownColumn(name.clone())),
            (Column::Name(name), None) => Err(IoError::UnknownColumn(name.clone())),
        }
    }

    fn name(&self, i: usize) -> String {
        self.names
            .as_ref()
            .and_then(|n| n.get(i).cloned())
            .unwrap_or_else(|| format!("column_{i}"))
    }
}

fn open(path: &Path) -> Result<File, IoError> {
    File::open(path).map_err(|source| IoError::File {
        path: path.to_owned(),
        source,
    })
}

fn reader<R: Read>(input: R, delimiter: u8, has_header: bool) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(has_header)
        .flexible(true)
        .from_reader(input)
}

fn read_header<R: Read>(rdr: &mut csv::Reader<R>, has_header: bool) -> Result<Header, IoError> {
    let names = if has_header {
        Some(rdr.headers()?.iter().map(|h| h.trim().to_owned()).collect())
    } else {
        None
    };
    Ok(Header { names })
}

fn cell(record: &csv::StringRecord, i: usize) -> Result<&str, String> {
    record
        .get(i)
        .ok_or_else(|| format!("missing column {i} ({} fields)", record.len()))
}

fn node_cell(record: &csv::StringRecord, i: usize) -> Result<NodeId, String> {
    let raw = cell(record, i)?;
    if raw.is_empty() {
        Err(format!("empty node id in column {i}"))
    } else {
        Ok(NodeId::from(raw))
    }
}

/// Property columns as (index, name, type).
type PropColumns = Vec<(usize, String, PropType)>;

fn prop_cells(record: &csv::StringRecord, columns: &PropColumns) -> Result<Vec<(String, PropValue)>, String> {
    let mut props = Vec::new();
    for (i, name, dtype) in columns {
        let raw = cell(record, *i)?;
        if raw.is_empty() {
            continue;
        }
        let value = dtype.parse_value(raw).map_err(|e| format!("property `{name}`: {e}"))?;
        props.push((name.clone(), value));
    }
    Ok(props)
}

fn resolve_props(header: &Header, declared: &[(Column, PropType)]) -> Result<PropColumns, IoError> {
    declared
        .iter()
        .map(|(c, t)| {
            let i = header.resolve(c)?;
            Ok((i, header.name(i), *t))
        })
        .collect()
}

struct EdgeRow {
    line: u64,
    time: Time,
    src: NodeId,
    dst: NodeId,
    layer: Option<String>,
    props: Vec<(String, PropValue)>,
}

/// Finishes a load: the report must contain at least one valid row, and in
/// strict mode no errors at all.
fn finish(report: LoadReport, strict: bool) -> Result<LoadReport, IoError> {
    if strict {
        if let Some(error) = report.errors.first() {
            return Err(IoError::RejectedRow {
                error: error.clone(),
            });
        }
    }
    if report.valid_rows == 0 {
        return Err(IoError::NoValidRows { report });
    }
    Ok(report)
}

/// Loads an edge table into a new graph.
pub fn load_edges(spec: &EdgeTableSpec) -> Result<(TemporalGraph, LoadReport), IoError> {
    let mut graph = TemporalGraph::new();
    let report = load_edges_into(&mut graph, spec)?;
    Ok((graph, report))
}

/// Loads an edge table, appending to an existing graph.
pub fn load_edges_into(graph: &mut TemporalGraph, spec: &EdgeTableSpec) -> Result<LoadReport, IoError> {
    load_edges_from_reader(graph, open(&spec.path)?, spec)
}

/// Loads edges from any reader; `spec.path` is ignored.
///
/// Rows are parsed first, then applied in a stable sort by timestamp, so the
/// sequence index of equal-time rows follows file order. Rows that fail to
/// parse or apply are reported with their line number.
pub fn load_edges_from_reader<R: Read>(
    graph: &mut TemporalGraph,
    input: R,
    spec: &EdgeTableSpec,
) -> Result<LoadReport, IoError> {
    let mut rdr = reader(input, spec.delimiter, spec.has_header);
    let header = read_header(&mut rdr, spec.has_header)?;
    let src = header.resolve(&spec.source)?;
    let dst = header.resolve(&spec.target)?;
    let time = header.resolve(&spec.time)?;
    if src == dst || src == time || dst == time {
        return Err(IoError::InvalidSpec(
            "source, target and time columns must be distinct".into(),
        ));
    }
    let layer_col = match &spec.layer {
        LayerSource::Column(c) => Some(header.resolve(c)?),
        _ => None,
    };
    let mut props = resolve_props(&header, &spec.properties)?;
    if spec.typed_header_props {
        let names = header.names.as_ref().ok_or_else(|| {
            IoError::InvalidSpec("typed header properties need a header row".into())
        })?;
        for (i, cell) in names.iter().enumerate() {
            if [Some(src), Some(dst), Some(time), layer_col].contains(&Some(i))
                || props.iter().any(|(j, _, _)| *j == i)
            {
                continue;
            }
            let (name, dtype) = cell.rsplit_once(':').ok_or_else(|| {
                IoError::InvalidSpec(format!("header cell `{cell}` is not `name:type`"))
            })?;
            let dtype = dtype.parse().map_err(IoError::InvalidSpec)?;
            props.push((i, name.to_owned(), dtype));
        }
    }

    let mut report = LoadReport::default();
    let mut rows = Vec::new();
    for (n, record) in rdr.records().enumerate() {
        report.total_rows += 1;
        let fallback_line = n as u64 + 1 + spec.has_header as u64;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(fallback_line, |p| p.line());
                report.errors.push(RowError {
                    row: line,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map_or(fallback_line, |p| p.line());
        let parsed = (|| {
            Ok::<_, String>(EdgeRow {
                line,
                time: spec.time_format.parse(cell(&record, time)?)?,
                src: node_cell(&record, src)?,
                dst: node_cell(&record, dst)?,
                layer: match (&spec.layer, layer_col) {
                    (LayerSource::Fixed(name), _) => Some(name.clone()),
                    (_, Some(i)) => Some(cell(&record, i)?.to_owned()).filter(|l| !l.is_empty()),
                    _ => None,
                },
                props: prop_cells(&record, &props)?,
            })
        })();
        match parsed {
            Ok(row) => rows.push(row),
            Err(message) => report.errors.push(RowError { row: line, message }),
        }
    }

    rows.sort_by_key(|r| r.time);
    for row in rows {
        match graph.add_edge(row.time, row.src, row.dst, row.props, row.layer.as_deref()) {
            Ok(_) => report.valid_rows += 1,
            Err(e) => report.errors.push(RowError {
                row: row.line,
                message: e.to_string(),
            }),
        }
    }
    report.errors.sort_by_key(|e| e.row);
    finish(report, spec.strict)
}

/// Applies one `add_node` per row of a node table.
pub fn load_node_props(graph: &mut TemporalGraph, spec: &NodeTableSpec) -> Result<LoadReport, IoError> {
    load_node_props_from_reader(graph, open(&spec.path)?, spec)
}

pub fn load_node_props_from_reader<R: Read>(
    graph: &mut TemporalGraph,
    input: R,
    spec: &NodeTableSpec,
) -> Result<LoadReport, IoError> {
    let mut rdr = reader(input, spec.delimiter, spec.has_header);
    let header = read_header(&mut rdr, spec.has_header)?;
    let id = header.resolve(&spec.id)?;
    let time = header.resolve(&spec.time)?;
    if id == time {
        return Err(IoError::InvalidSpec("id and time columns must be distinct".into()));
    }
    let props = resolve_props(&header, &spec.properties)?;

    let mut report = LoadReport::default();
    let mut rows = Vec::new();
    for (n, record) in rdr.records().enumerate() {
        report.total_rows += 1;
        let fallback_line = n as u64 + 1 + spec.has_header as u64;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                report.errors.push(RowError {
                    row: e.position().map_or(fallback_line, |p| p.line()),
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map_or(fallback_line, |p| p.line());
        let parsed = (|| {
            Ok::<_, String>((
                spec.time_format.parse(cell(&record, time)?)?,
                node_cell(&record, id)?,
                prop_cells(&record, &props)?,
            ))
        })();
        match parsed {
            Ok((t, node, props)) => rows.push((line, t, node, props)),
            Err(message) => report.errors.push(RowError { row: line, message }),
        }
    }
    rows.sort_by_key(|r| r.1);
    for (line, t, node, props) in rows {
        match graph.add_node(t, node, props) {
            Ok(_) => report.valid_rows += 1,
            Err(e) => report.errors.push(RowError {
                row: line,
                message: e.to_string(),
            }),
        }
    }
    report.errors.sort_by_key(|e| e.row);
    finish(report, spec.strict)
}
