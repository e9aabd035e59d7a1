use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;

use serde_json::{json, Map, Value};

use super::{write_graph_json, IoError};
use crate::algorithms::{AlgorithmResult, MotifMatrix, ResultValue, WindowedResult, COLUMN_KEYS, ROW_KEYS};
use crate::store::{PropType, Update};
use crate::{GraphView, Time, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    /// Edge additions as delimited text, one row per addition event.
    EdgeListCsv,
    /// The lossless graph document.
    GraphJson,
    ResultCsv,
    ResultJson,
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExportFormat::EdgeListCsv => "edge_list_csv",
            ExportFormat::GraphJson => "graph_json",
            ExportFormat::ResultCsv => "result_csv",
            ExportFormat::ResultJson => "result_json",
        })
    }
}

pub trait Exportable {
    fn export_to(&self, format: ExportFormat, out: &mut dyn Write) -> Result<(), IoError>;
}

pub fn export<W: Write>(item: &impl Exportable, format: ExportFormat, mut out: W) -> Result<(), IoError> {
    item.export_to(format, &mut out)
}

impl Exportable for GraphView {
    fn export_to(&self, format: ExportFormat, out: &mut dyn Write) -> Result<(), IoError> {
        match format {
            ExportFormat::EdgeListCsv => write_edge_list_csv(self, out),
            ExportFormat::GraphJson => write_graph_json(&self.materialise(), out),
            other => Err(IoError::UnsupportedExport("a graph view", other)),
        }
    }
}

impl Exportable for AlgorithmResult {
    fn export_to(&self, format: ExportFormat, out: &mut dyn Write) -> Result<(), IoError> {
        match format {
            ExportFormat::ResultCsv => write_result_csv(self, out),
            ExportFormat::ResultJson => write_result_json(self, out),
            other => Err(IoError::UnsupportedExport("an algorithm result", other)),
        }
    }
}

impl Exportable for MotifMatrix {
    fn export_to(&self, format: ExportFormat, out: &mut dyn Write) -> Result<(), IoError> {
        match format {
            ExportFormat::ResultCsv => write_motif_csv(self, out),
            ExportFormat::ResultJson => write_motif_json(self, out),
            other => Err(IoError::UnsupportedExport("a motif matrix", other)),
        }
    }
}

impl Exportable for WindowedResult {
    fn export_to(&self, format: ExportFormat, out: &mut dyn Write) -> Result<(), IoError> {
        match format {
            ExportFormat::ResultCsv => write_windowed_csv(self, out),
            ExportFormat::ResultJson => write_windowed_json(self, out),
            other => Err(IoError::UnsupportedExport("a windowed result", other)),
        }
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn cell(value: &ResultValue) -> String {
    match value {
        ResultValue::Int(v) => v.to_string(),
        ResultValue::Float(v) => format!("{v:?}"),
        ResultValue::Null => String::new(),
    }
}

/// Writes every edge addition visible through `view`, ordered by time then
/// insertion order, as `source,target,time,layer` followed by one
/// `name:type` column per edge property. Deletions are not part of this
/// format, and empty string values read back as absent.
pub fn write_edge_list_csv<W: Write>(view: &GraphView, out: W) -> Result<(), IoError> {
    let graph = view.materialise();
    let rows: Vec<_> = graph
        .canonical_log()
        .into_iter()
        .filter_map(|(t, u)| match u {
            Update::AddEdge {
                src,
                dst,
                layer,
                props,
            } => Some((t, src, dst, layer, props)),
            _ => None,
        })
        .collect();
    let columns: BTreeSet<(String, PropType)> = rows
        .iter()
        .flat_map(|r| r.4.iter().map(|(k, v)| (k.clone(), v.dtype())))
        .collect();

    let mut w = csv_writer(out);
    let mut header = vec!["source".to_owned(), "target".into(), "time".into(), "layer".into()];
    header.extend(columns.iter().map(|(k, t)| format!("{k}:{t}")));
    w.write_record(&header)?;
    for (t, src, dst, layer, props) in rows {
        let mut record = vec![src.to_string(), dst.to_string(), t.to_string(), layer];
        for (name, dtype) in &columns {
            let value = props
                .iter()
                .find(|(k, v)| k == name && v.dtype() == *dtype)
                .map(|(_, v)| v.to_string())
                .unwrap_or_default();
            record.push(value);
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// `node,<column>...`, one row per node sorted by id; null cells are empty.
pub fn write_result_csv<W: Write>(result: &AlgorithmResult, out: W) -> Result<(), IoError> {
    let mut w = csv_writer(out);
    let mut header = vec!["node".to_owned()];
    header.extend(result.columns.iter().cloned());
    w.write_record(&header)?;
    for row in &result.rows {
        let mut record = vec![row.node.to_string()];
        record.extend(row.values.iter().map(cell));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<W: Write>(value: &Value, mut out: W) -> Result<(), IoError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_result_json<W: Write>(result: &AlgorithmResult, out: W) -> Result<(), IoError> {
    let rows: Vec<Value> = result
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            obj.insert("node".into(), json!(row.node));
            for (c, v) in result.columns.iter().zip(&row.values) {
                obj.insert(c.clone(), json!(v));
            }
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "algorithm": result.name,
        "columns": result.columns,
        "metadata": result.metadata,
        "rows": rows,
    });
    write_json(&doc, out)
}

/// The 6x6 matrix with row keys in the first column.
pub fn write_motif_csv<W: Write>(matrix: &MotifMatrix, out: W) -> Result<(), IoError> {
    let mut w = csv_writer(out);
    let mut header = vec!["motif"];
    header.extend(COLUMN_KEYS);
    w.write_record(&header)?;
    for (key, row) in ROW_KEYS.iter().zip(&matrix.counts) {
        let mut record = vec![key.to_string()];
        record.extend(row.iter().map(u64::to_string));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn motif_value(matrix: &MotifMatrix) -> Value {
    json!({
        "delta": matrix.delta,
        "total": matrix.total(),
        "rows": ROW_KEYS,
        "columns": COLUMN_KEYS,
        "counts": matrix.counts,
    })
}

pub fn write_motif_json<W: Write>(matrix: &MotifMatrix, out: W) -> Result<(), IoError> {
    write_json(&motif_value(matrix), out)
}

/// Long format for motif counts over many windows: one matrix row per line,
/// prefixed by its window bounds.
pub fn write_windowed_motif_csv<W: Write>(results: &[(Window, MotifMatrix)], out: W) -> Result<(), IoError> {
    let mut w = csv_writer(out);
    let mut header = vec!["window_start", "window_end", "motif"];
    header.extend(COLUMN_KEYS);
    w.write_record(&header)?;
    for (window, matrix) in results {
        for (key, row) in ROW_KEYS.iter().zip(&matrix.counts) {
            let mut record = vec![window.start().to_string(), window.end().to_string(), key.to_string()];
            record.extend(row.iter().map(u64::to_string));
            w.write_record(&record)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_windowed_motif_json<W: Write>(results: &[(Window, MotifMatrix)], out: W) -> Result<(), IoError> {
    let windows: Vec<Value> = results
        .iter()
        .map(|(window, m)| {
            let mut v = motif_value(m);
            v["window_start"] = json!(window.start());
            v["window_end"] = json!(window.end());
            v
        })
        .collect();
    write_json(&json!({ "windows": windows }), out)
}

/// Column key for a window: its start, or its end when the start is unbounded.
fn window_key(w: &Window) -> Time {
    if w.start() == Time::MIN {
        w.end()
    } else {
        w.start()
    }
}

/// `node,<window key>...` with one column per window.
pub fn write_windowed_csv<W: Write>(result: &WindowedResult, out: W) -> Result<(), IoError> {
    let mut w = csv_writer(out);
    let mut header = vec!["node".to_owned()];
    header.extend(result.windows.iter().map(|w| window_key(w).to_string()));
    w.write_record(&header)?;
    for (node, values) in &result.rows {
        let mut record = vec![node.to_string()];
        record.extend(values.iter().map(|v| v.as_ref().map(cell).unwrap_or_default()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_windowed_json<W: Write>(result: &WindowedResult, out: W) -> Result<(), IoError> {
    let windows: Vec<Value> = result
        .windows
        .iter()
        .zip(&result.errors)
        .map(|(w, e)| {
            json!({
                "start": (w.start() != Time::MIN).then_some(w.start()),
                "end": (w.end() != Time::MAX).then_some(w.end()),
                "error": e,
            })
        })
        .collect();
    let rows: Vec<Value> = result
        .rows
        .iter()
        .map(|(node, values)| json!({ "node": node, "values": values }))
        .collect();
    let doc = json!({
        "algorithm": result.algorithm,
        "column": result.column,
        "windows": windows,
        "rows": rows,
    });
    write_json(&doc, out)
}
