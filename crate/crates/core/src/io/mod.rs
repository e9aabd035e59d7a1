//! Loading delimited edge and node tables, and exporting views and results.
//!
//! Formats are documented byte-for-byte in `docs/FORMATS.md`.

mod export;
mod json;
mod load;

use std::path::{Path, PathBuf};

pub use export::{
    export, write_edge_list_csv, write_motif_csv, write_motif_json, write_result_csv,
    write_result_json, write_windowed_csv, write_windowed_json, write_windowed_motif_csv,
    write_windowed_motif_json, ExportFormat, Exportable,
};
pub use json::{read_graph_json, write_graph_json, FORMAT_VERSION};
pub use load::{
    load_edges, load_edges_from_reader, load_edges_into, load_node_props,
    load_node_props_from_reader, Column, EdgeTableSpec, LayerSource, LoadReport, NodeTableSpec,
    RowError, TimeFormat,
};

use crate::{GraphError, TemporalGraph};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot access {}: {source}", path.display())]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("invalid graph document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("column `{0}` not found")]
    UnknownColumn(String),
    #[error("invalid table spec: {0}")]
    InvalidSpec(String),
    #[error("no valid rows ({} rows rejected)", report.errors.len())]
    NoValidRows { report: LoadReport },
    #[error("row {}: {}", error.row, error.message)]
    RejectedRow { error: RowError },
    #[error("unsupported format_version {0}")]
    UnsupportedVersion(u64),
    #[error("{0} cannot be exported as {1}")]
    UnsupportedExport(&'static str, ExportFormat),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Opens a graph file by extension: `.json` as a graph document, anything
/// else as an edge table. Edge tables with `source` and `target` headers use
/// the edge-list layout; otherwise `src`, `dst` and `time` columns are read,
/// with an optional `layer` column.
pub fn open_graph(path: &Path) -> Result<(TemporalGraph, Option<LoadReport>), IoError> {
    if path.extension().is_some_and(|e| e == "json") {
        let file = std::fs::File::open(path).map_err(|source| IoError::File {
            path: path.to_owned(),
            source,
        })?;
        return Ok((read_graph_json(std::io::BufReader::new(file))?, None));
    }
    let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => IoError::File {
            path: path.to_owned(),
            source,
        },
        other => IoError::InvalidSpec(format!("{other:?}")),
    })?;
    let headers = rdr.headers()?.clone();
    let has = |name: &str| headers.iter().any(|h| h.trim() == name);
    let spec = if has("source") && has("target") {
        EdgeTableSpec::edge_list(path)
    } else {
        let mut spec = EdgeTableSpec::new(path, "src", "dst", "time");
        if has("layer") {
            spec = spec.layer(LayerSource::Column("layer".into()));
        }
        spec
    };
    let (graph, report) = load_edges(&spec)?;
    Ok((graph, Some(report)))
}
