//! GraphQL over HTTP for temporal graphs.
//!
//! Graph files in a directory are loaded at start-up and served read-only.
//! Every field delegates to the library; view fields return new graph handles,
//! so constraints chain exactly like [`temporal_graph::GraphView`] methods.

mod registry;
mod schema;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use async_graphql_axum::GraphQL;
use axum::extract::State;
use axum::routing::{get, post_service};
use axum::{Json, Router};
use serde_json::{json, Value};
use temporal_graph::io::IoError;
use tokio::net::TcpListener;

pub use registry::Registry;
pub use schema::{build_schema, schema_sdl, GraphSchema, Limits};

pub const DEFAULT_BIND: &str = "127.0.0.1:1736";

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("cannot read graph directory {}: {source}", path.display())]
    Directory {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("failed to load {}: {source}", path.display())]
    Load { path: PathBuf, source: IoError },
    #[error("graph `{0}` already exists")]
    Duplicate(String),
    #[error("path `{0}` is outside the graph directory")]
    PathEscapes(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug)]
pub struct ServerConfig {
    pub bind: SocketAddr,
    pub graph_dir: PathBuf,
    pub limits: Limits,
}

impl ServerConfig {
    pub fn new(graph_dir: impl Into<PathBuf>) -> Self {
        ServerConfig {
            bind: DEFAULT_BIND.parse().unwrap(),
            graph_dir: graph_dir.into(),
            limits: Limits::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ServiceError> {
        if self.limits.max_page_size == 0 {
            return Err(ServiceError::Config("page size limit must be positive".into()));
        }
        if self.limits.algorithm_timeout.is_zero() {
            return Err(ServiceError::Config("algorithm timeout must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone)]
struct AppState {
    registry: Arc<Registry>,
}

async fn health(State(state): State<AppState>) -> Json<Value> {
    Json(json!({
        "status": "ok",
        "service": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "graphs": state.registry.names().len(),
    }))
}

/// `POST /graphql` and `GET /health` over a registry.
pub fn router(registry: Arc<Registry>, limits: Limits) -> Router {
    let schema = build_schema(Arc::clone(&registry), limits);
    Router::new()
        .route("/graphql", post_service(GraphQL::new(schema)))
        .route("/health", get(health))
        .with_state(AppState { registry })
}

/// Serves on an already-bound listener until `shutdown` resolves.
pub async fn serve_on(
    listener: TcpListener,
    registry: Arc<Registry>,
    limits: Limits,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> Result<(), ServiceError> {
    axum::serve(listener, router(registry, limits))
        .with_graceful_shutdown(shutdown)
        .await?;
    Ok(())
}

/// Loads the graph directory, binds and serves until Ctrl-C.
pub async fn serve(config: ServerConfig) -> Result<(), ServiceError> {
    config.validate()?;
    let registry = Arc::new(Registry::from_dir(&config.graph_dir)?);
    let listener = TcpListener::bind(config.bind)
        .await
        .map_err(|source| ServiceError::Bind {
            addr: config.bind,
            source,
        })?;
    log::info!(
        "serving {} graph(s) from {} on http://{}",
        registry.names().len(),
        config.graph_dir.display(),
        listener.local_addr()?
    );
    serve_on(listener, registry, config.limits, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}
