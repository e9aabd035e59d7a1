use std::collections::BTreeMap;
use std::path::{Component, Path, PathBuf};
use std::sync::{Arc, RwLock};

use temporal_graph::io::open_graph;
use temporal_graph::TemporalGraph;

use crate::ServiceError;

/// Named graphs behind a lock. Graphs are immutable once published; a load
/// becomes visible only when it has fully completed.
#[derive(Debug)]
pub struct Registry {
    dir: PathBuf,
    graphs: RwLock<BTreeMap<String, Arc<TemporalGraph>>>,
}

impl Registry {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Registry {
            dir: dir.into(),
            graphs: RwLock::new(BTreeMap::new()),
        }
    }

    /// Loads every `*.json` and `*.csv` file in `dir`, named by file stem.
    pub fn from_dir(dir: &Path) -> Result<Self, ServiceError> {
        let registry = Registry::new(dir);
        let entries = std::fs::read_dir(dir).map_err(|source| ServiceError::Directory {
            path: dir.to_owned(),
            source,
        })?;
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "json" || e == "csv"))
            .collect();
        paths.sort();
        for path in paths {
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            let graph = load_file(&path)?;
            registry.insert(&name, graph)?;
        }
        Ok(registry)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn insert(&self, name: &str, graph: TemporalGraph) -> Result<Arc<TemporalGraph>, ServiceError> {
        let mut graphs = self.graphs.write().unwrap();
        if graphs.contains_key(name) {
            return Err(ServiceError::Duplicate(name.to_owned()));
        }
        let graph = Arc::new(graph);
        graphs.insert(name.to_owned(), Arc::clone(&graph));
        Ok(graph)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.graphs.read().unwrap().contains_key(name)
    }

    pub fn get(&self, name: &str) -> Option<Arc<TemporalGraph>> {
        self.graphs.read().unwrap().get(name).cloned()
    }

    pub fn names(&self) -> Vec<String> {
        self.graphs.read().unwrap().keys().cloned().collect()
    }

    pub fn snapshot(&self) -> Vec<(String, Arc<TemporalGraph>)> {
        self.graphs
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), Arc::clone(v)))
            .collect()
    }

    /// Resolves a client-supplied relative path inside the graph directory.
    pub fn resolve(&self, relative: &str) -> Result<PathBuf, ServiceError> {
        let rel = Path::new(relative);
        let escapes = rel.is_absolute()
            || rel
                .components()
                .any(|c| !matches!(c, Component::Normal(_) | Component::CurDir));
        if escapes || relative.is_empty() {
            return Err(ServiceError::PathEscapes(relative.to_owned()));
        }
        let path = self.dir.join(rel);
        // symlinks may still point elsewhere
        if let (Ok(real), Ok(root)) = (path.canonicalize(), self.dir.canonicalize()) {
            if !real.starts_with(root) {
                return Err(ServiceError::PathEscapes(relative.to_owned()));
            }
        }
        Ok(path)
    }
}

pub(crate) fn load_file(path: &Path) -> Result<TemporalGraph, ServiceError> {
    let (graph, report) = open_graph(path).map_err(|source| ServiceError::Load {
        path: path.to_owned(),
        source,
    })?;
    if let Some(report) = report.filter(|r| !r.errors.is_empty()) {
        log::warn!(
            "{}: skipped {} of {} rows",
            path.display(),
            report.errors.len(),
            report.total_rows
        );
    }
    Ok(graph)
}
