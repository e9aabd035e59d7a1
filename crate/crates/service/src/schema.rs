use std::sync::Arc;
use std::time::Duration;

use async_graphql::{
    Context, EmptySubscription, Enum, ErrorExtensions, InputValueError, InputValueResult, Json, Object,
    Scalar, ScalarType, Schema, SimpleObject, Value,
};
use temporal_graph::algorithms::{
    degree_stats, pagerank, temporal_motifs, temporal_reachability, PageRankConfig, ResultValue,
    COLUMN_KEYS, ROW_KEYS,
};
use temporal_graph::io::{load_edges, read_graph_json, Column, EdgeTableSpec, LayerSource, TimeFormat};
use temporal_graph::{DeletionSemantics, GraphError, GraphView, NodeId, TemporalGraph};

use crate::registry::Registry;
use crate::ServiceError;

pub type GraphSchema = Schema<Query, Mutation, EmptySubscription>;

/// Per-request limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_page_size: usize,
    pub algorithm_timeout: Duration,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_page_size: 1000,
            algorithm_timeout: Duration::from_secs(30),
        }
    }
}

pub fn build_schema(registry: Arc<Registry>, limits: Limits) -> GraphSchema {
    Schema::build(Query, Mutation, EmptySubscription)
        .data(registry)
        .data(limits)
        .finish()
}

/// The schema document served through introspection.
pub fn schema_sdl() -> String {
    Schema::build(Query, Mutation, EmptySubscription).finish().sdl()
}

fn error(code: &'static str, message: impl Into<String>) -> async_graphql::Error {
    async_graphql::Error::new(message).extend_with(|_, e| e.set("code", code))
}

fn graph_error(e: GraphError) -> async_graphql::Error {
    let code = match e {
        GraphError::NodeNotFound(_) | GraphError::EdgeNotFound { .. } | GraphError::LayerNotFound(_) => {
            "NOT_FOUND"
        }
        GraphError::EmptyGraph | GraphError::EmptyView => "EMPTY",
        _ => "INVALID_ARGUMENT",
    };
    error(code, e.to_string())
}

fn service_error(e: ServiceError) -> async_graphql::Error {
    let code = match e {
        ServiceError::Duplicate(_) => "ALREADY_EXISTS",
        ServiceError::PathEscapes(_) => "FORBIDDEN",
        _ => "IO_ERROR",
    };
    error(code, e.to_string())
}

/// A 64-bit integer, used for timestamps and counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Long(pub i64);

#[Scalar]
impl ScalarType for Long {
    fn parse(value: Value) -> InputValueResult<Self> {
        match &value {
            Value::Number(n) => n
                .as_i64()
                .map(Long)
                .ok_or_else(|| InputValueError::custom(format!("{n} is not a 64-bit integer"))),
            Value::String(s) => s
                .parse()
                .map(Long)
                .map_err(|_| InputValueError::custom(format!("`{s}` is not a 64-bit integer"))),
            _ => Err(InputValueError::expected_type(value)),
        }
    }

    fn to_value(&self) -> Value {
        Value::Number(self.0.into())
    }
}

#[derive(Enum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    Event,
    Persistent,
}

impl From<Semantics> for DeletionSemantics {
    fn from(s: Semantics) -> Self {
        match s {
            Semantics::Event => DeletionSemantics::Event,
            Semantics::Persistent => DeletionSemantics::Persistent,
        }
    }
}

impl From<DeletionSemantics> for Semantics {
    fn from(s: DeletionSemantics) -> Self {
        match s {
            DeletionSemantics::Event => Semantics::Event,
            DeletionSemantics::Persistent => Semantics::Persistent,
        }
    }
}

#[derive(Enum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
    Both,
}

impl From<Direction> for temporal_graph::Direction {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Out => temporal_graph::Direction::Out,
            Direction::In => temporal_graph::Direction::In,
            Direction::Both => temporal_graph::Direction::Both,
        }
    }
}

pub struct Query;

#[Object]
impl Query {
    /// All loaded graphs, by name.
    async fn graphs(&self, ctx: &Context<'_>) -> Vec<GraphMeta> {
        let registry = ctx.data_unchecked::<Arc<Registry>>();
        registry
            .snapshot()
            .into_iter()
            .map(|(name, g)| GraphMeta::new(name, &g))
            .collect()
    }

    /// An unconstrained handle on a loaded graph.
    async fn graph(&self, ctx: &Context<'_>, name: String) -> async_graphql::Result<GraphHandle> {
        let registry = ctx.data_unchecked::<Arc<Registry>>();
        match registry.get(&name) {
            Some(g) => Ok(GraphHandle {
                name,
                view: g.view(),
            }),
            None => Err(error("NOT_FOUND", format!("graph `{name}` not found"))),
        }
    }
}

pub struct Mutation;

#[Object]
impl Mutation {
    /// Loads a graph file from inside the graph directory and registers it.
    /// `.json` files are read as graph documents; other files as edge tables
    /// described by the remaining arguments.
    #[allow(clippy::too_many_arguments)]
    async fn load_graph(
        &self,
        ctx: &Context<'_>,
        name: String,
        path: String,
        #[graphql(default = "src")] source: String,
        #[graphql(default = "dst")] target: String,
        #[graphql(default = "time")] time: String,
        #[graphql(default = "epoch_millis")] time_format: String,
        layer_column: Option<String>,
        #[graphql(default = ",")] delimiter: String,
        #[graphql(default = false)] strict: bool,
    ) -> async_graphql::Result<GraphMeta> {
        let registry = Arc::clone(ctx.data_unchecked::<Arc<Registry>>());
        if registry.contains(&name) {
            return Err(service_error(ServiceError::Duplicate(name)));
        }
        let full = registry.resolve(&path).map_err(service_error)?;
        let time_format: TimeFormat = time_format
            .parse()
            .map_err(|e: String| error("INVALID_ARGUMENT", e))?;
        let delimiter = match delimiter.as_bytes() {
            [b] => *b,
            _ => return Err(error("INVALID_ARGUMENT", "delimiter must be a single byte")),
        };
        let is_json = full.extension().is_some_and(|e| e == "json");
        let load = move || -> Result<TemporalGraph, ServiceError> {
            let wrap = |source| ServiceError::Load {
                path: full.clone(),
                source,
            };
            if is_json {
                let file = std::fs::File::open(&full)?;
                return read_graph_json(std::io::BufReader::new(file)).map_err(wrap);
            }
            let mut spec = EdgeTableSpec::new(&full, source, target, time)
                .time_format(time_format)
                .delimiter(delimiter)
                .strict(strict);
            if let Some(layer) = layer_column {
                spec = spec.layer(LayerSource::Column(Column::Name(layer)));
            }
            Ok(load_edges(&spec).map_err(wrap)?.0)
        };
        let graph = tokio::task::spawn_blocking(load)
            .await
            .map_err(|e| error("INTERNAL", e.to_string()))?
            .map_err(service_error)?;
        let graph = registry.insert(&name, graph).map_err(service_error)?;
        Ok(GraphMeta::new(name, &graph))
    }
}

#[derive(SimpleObject)]
pub struct GraphMeta {
    name: String,
    count_nodes: usize,
    count_edges: usize,
    earliest_time: Option<Long>,
    latest_time: Option<Long>,
    layers: Vec<String>,
}

impl GraphMeta {
    fn new(name: String, g: &TemporalGraph) -> Self {
        GraphMeta {
            name,
            count_nodes: g.count_nodes(),
            count_edges: g.count_edges(),
            earliest_time: g.earliest_time().ok().map(Long),
            latest_time: g.latest_time().ok().map(Long),
            layers: g.layer_names().to_vec(),
        }
    }
}

fn page_bounds(ctx: &Context<'_>, total: usize, offset: usize, limit: Option<usize>) -> (usize, usize) {
    let max = ctx.data_unchecked::<Limits>().max_page_size;
    let limit = limit.unwrap_or(max).min(max);
    let start = offset.min(total);
    (start, (start + limit).min(total))
}

/// A graph seen through a stack of view constraints.
pub struct GraphHandle {
    name: String,
    view: GraphView,
}

impl GraphHandle {
    fn derive(&self, view: GraphView) -> GraphHandle {
        GraphHandle {
            name: self.name.clone(),
            view,
        }
    }
}

#[Object]
impl GraphHandle {
    async fn name(&self) -> &str {
        &self.name
    }

    async fn count_nodes(&self) -> usize {
        self.view.count_nodes()
    }

    async fn count_edges(&self) -> usize {
        self.view.count_edges()
    }

    /// Null when the view contains no events.
    async fn earliest_time(&self) -> Option<Long> {
        self.view.earliest_time().ok().map(Long)
    }

    async fn latest_time(&self) -> Option<Long> {
        self.view.latest_time().ok().map(Long)
    }

    /// Visible nodes in a stable order, paginated.
    async fn nodes(
        &self,
        ctx: &Context<'_>,
        #[graphql(default = 0)] offset: usize,
        limit: Option<usize>,
    ) -> NodePage {
        let ids = self.view.node_ids();
        let (start, end) = page_bounds(ctx, ids.len(), offset, limit);
        NodePage {
            total: ids.len(),
            offset: start,
            items: ids[start..end]
                .iter()
                .map(|id| Node {
                    view: self.view.clone(),
                    id: id.clone(),
                })
                .collect(),
        }
    }

    /// Null when the node is not visible in this view.
    async fn node(&self, id: String) -> Option<Node> {
        let id = NodeId::parse(&id);
        self.view.has_node(&id).then(|| Node {
            view: self.view.clone(),
            id,
        })
    }

    async fn edges(
        &self,
        ctx: &Context<'_>,
        #[graphql(default = 0)] offset: usize,
        limit: Option<usize>,
    ) -> EdgePage {
        let edges = self.view.edge_list();
        let (start, end) = page_bounds(ctx, edges.len(), offset, limit);
        EdgePage {
            total: edges.len(),
            offset: start,
            items: edges[start..end]
                .iter()
                .map(|(s, d)| Edge {
                    src: s.to_string(),
                    dst: d.to_string(),
                })
                .collect(),
        }
    }

    async fn layer_names(&self) -> Vec<String> {
        match self.view.layer_names() {
            Some(names) => names.into_iter().map(str::to_owned).collect(),
            None => self.view.graph().layer_names().to_vec(),
        }
    }

    async fn current_semantics(&self) -> Semantics {
        self.view.semantics().into()
    }

    /// Restricts to `[start, end)`, intersected with any enclosing window.
    async fn window(&self, start: Long, end: Long) -> async_graphql::Result<GraphHandle> {
        Ok(self.derive(self.view.window(start.0, end.0).map_err(graph_error)?))
    }

    /// The graph as of instant `time`.
    async fn at(&self, time: Long) -> GraphHandle {
        self.derive(self.view.at(time.0))
    }

    async fn layers(&self, names: Vec<String>) -> async_graphql::Result<GraphHandle> {
        Ok(self.derive(self.view.layers(&names).map_err(graph_error)?))
    }

    /// Unknown ids are ignored.
    async fn subgraph(&self, ids: Vec<String>) -> GraphHandle {
        self.derive(self.view.subgraph(ids.iter().map(|s| NodeId::parse(s))))
    }

    async fn semantics(&self, kind: Semantics) -> GraphHandle {
        self.derive(self.view.with_semantics(kind.into()))
    }

    async fn algorithms(&self) -> AlgorithmsRoot {
        AlgorithmsRoot {
            view: self.view.clone(),
        }
    }
}

#[derive(SimpleObject)]
pub struct NodePage {
    total: usize,
    offset: usize,
    items: Vec<Node>,
}

#[derive(SimpleObject)]
pub struct EdgePage {
    total: usize,
    offset: usize,
    items: Vec<Edge>,
}

#[derive(SimpleObject)]
pub struct Edge {
    src: String,
    dst: String,
}

pub struct Node {
    view: GraphView,
    id: NodeId,
}

#[Object]
impl Node {
    async fn id(&self) -> String {
        self.id.to_string()
    }

    async fn degree(&self, #[graphql(default_with = "Direction::Both")] direction: Direction) -> async_graphql::Result<usize> {
        self.view.degree(&self.id, direction.into()).map_err(graph_error)
    }

    async fn in_degree(&self) -> async_graphql::Result<usize> {
        self.view
            .degree(&self.id, temporal_graph::Direction::In)
            .map_err(graph_error)
    }

    async fn out_degree(&self) -> async_graphql::Result<usize> {
        self.view
            .degree(&self.id, temporal_graph::Direction::Out)
            .map_err(graph_error)
    }

    async fn neighbours(
        &self,
        #[graphql(default_with = "Direction::Both")] direction: Direction,
    ) -> async_graphql::Result<Vec<String>> {
        Ok(self
            .view
            .neighbours(&self.id, direction.into())
            .map_err(graph_error)?
            .iter()
            .map(NodeId::to_string)
            .collect())
    }

    /// Timestamps of the node's own and incident events within the view's window.
    async fn history(&self) -> async_graphql::Result<Vec<Long>> {
        let w = self.view.window_bounds();
        Ok(self
            .view
            .graph()
            .node_history(&self.id)
            .map_err(graph_error)?
            .into_iter()
            .filter(|t| w.contains(*t))
            .map(Long)
            .collect())
    }

    /// Latest value of a temporal property visible in the view.
    async fn property(&self, name: String) -> async_graphql::Result<Option<Json<serde_json::Value>>> {
        let value = self
            .view
            .node_property_latest(&self.id, &name)
            .map_err(graph_error)?;
        Ok(value.map(|v| Json(prop_json(&v))))
    }
}

fn prop_json(v: &temporal_graph::PropValue) -> serde_json::Value {
    use temporal_graph::PropValue;
    match v {
        PropValue::Int(i) => (*i).into(),
        PropValue::Float(f) => serde_json::Value::from(*f),
        PropValue::Str(s) => s.clone().into(),
        PropValue::Bool(b) => (*b).into(),
    }
}

/// Runs an algorithm off the async runtime, bounded by the configured timeout.
async fn run_limited<T, F>(ctx: &Context<'_>, job: F) -> async_graphql::Result<T>
where
    T: Send + 'static,
    F: FnOnce() -> temporal_graph::Result<T> + Send + 'static,
{
    let timeout = ctx.data_unchecked::<Limits>().algorithm_timeout;
    match tokio::time::timeout(timeout, tokio::task::spawn_blocking(job)).await {
        Err(_) => Err(error(
            "TIMEOUT",
            format!("algorithm exceeded {} s", timeout.as_secs_f64()),
        )),
        Ok(Err(e)) => Err(error("INTERNAL", e.to_string())),
        Ok(Ok(r)) => r.map_err(graph_error),
    }
}

pub struct AlgorithmsRoot {
    view: GraphView,
}

#[derive(SimpleObject)]
pub struct NodeScore {
    node: String,
    score: f64,
}

#[derive(SimpleObject)]
pub struct NodeArrival {
    node: String,
    arrival: Long,
}

#[derive(SimpleObject)]
pub struct NodeDegree {
    node: String,
    in_degree: Long,
    out_degree: Long,
    total: Long,
}

#[derive(SimpleObject)]
pub struct MotifCell {
    /// Such as `"ab ba ab"`.
    signature: String,
    count: Long,
}

#[derive(SimpleObject)]
pub struct MotifMatrixPayload {
    delta: Long,
    total: Long,
    rows: Vec<String>,
    columns: Vec<String>,
    /// Row-major 6x6 counts, rows and columns in the order above.
    counts: Vec<Vec<Long>>,
    cells: Vec<MotifCell>,
}

fn int(v: &ResultValue) -> Long {
    match v {
        ResultValue::Int(i) => Long(*i),
        _ => Long(0),
    }
}

#[Object]
impl AlgorithmsRoot {
    /// Scores sorted by node id, or the top `topK` by score.
    async fn pagerank(
        &self,
        ctx: &Context<'_>,
        #[graphql(default = 0.85)] damping: f64,
        #[graphql(default = 1e-7)] tolerance: f64,
        #[graphql(default = 100)] max_iterations: usize,
        top_k: Option<usize>,
    ) -> async_graphql::Result<Vec<NodeScore>> {
        let view = self.view.clone();
        let config = PageRankConfig {
            damping,
            tolerance,
            max_iterations,
        };
        let rows = run_limited(ctx, move || {
            let result = pagerank(&view, &config)?;
            match top_k {
                Some(k) => result.top_k(k),
                None => Ok(result
                    .rows
                    .into_iter()
                    .map(|r| (r.node, r.values[0].clone()))
                    .collect()),
            }
        })
        .await?;
        Ok(rows
            .into_iter()
            .map(|(node, v)| NodeScore {
                node: node.to_string(),
                score: v.as_f64().unwrap_or(0.0),
            })
            .collect())
    }

    async fn degree(&self, ctx: &Context<'_>) -> async_graphql::Result<Vec<NodeDegree>> {
        let view = self.view.clone();
        let result = run_limited(ctx, move || degree_stats(&view)).await?;
        Ok(result
            .rows
            .iter()
            .map(|r| NodeDegree {
                node: r.node.to_string(),
                in_degree: int(&r.values[0]),
                out_degree: int(&r.values[1]),
                total: int(&r.values[2]),
            })
            .collect())
    }

    async fn temporal_motifs(&self, ctx: &Context<'_>, delta: Long) -> async_graphql::Result<MotifMatrixPayload> {
        let view = self.view.clone();
        let m = run_limited(ctx, move || temporal_motifs(&view, delta.0)).await?;
        let mut cells = Vec::with_capacity(36);
        for (r, row) in ROW_KEYS.iter().enumerate() {
            for (c, col) in COLUMN_KEYS.iter().enumerate() {
                cells.push(MotifCell {
                    signature: format!("{row} {col}"),
                    count: Long(m.counts[r][c] as i64),
                });
            }
        }
        Ok(MotifMatrixPayload {
            delta: Long(m.delta),
            total: Long(m.total() as i64),
            rows: ROW_KEYS.iter().map(|s| s.to_string()).collect(),
            columns: COLUMN_KEYS.iter().map(|s| s.to_string()).collect(),
            counts: m
                .counts
                .iter()
                .map(|row| row.iter().map(|&v| Long(v as i64)).collect())
                .collect(),
            cells,
        })
    }

    /// Earliest arrival at every node reachable from `seeds`, sorted by node id.
    async fn temporal_reachability(
        &self,
        ctx: &Context<'_>,
        seeds: Vec<String>,
        start: Long,
        max_hops: Option<usize>,
    ) -> async_graphql::Result<Vec<NodeArrival>> {
        let view = self.view.clone();
        let seeds: Vec<NodeId> = seeds.iter().map(|s| NodeId::parse(s)).collect();
        let result = run_limited(ctx, move || temporal_reachability(&view, &seeds, start.0, max_hops)).await?;
        Ok(result
            .reached
            .into_iter()
            .map(|(node, t)| NodeArrival {
                node: node.to_string(),
                arrival: Long(t),
            })
            .collect())
    }
}
