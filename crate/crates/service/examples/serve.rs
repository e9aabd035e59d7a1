//! Serve the bundled datasets over GraphQL, run a few queries, and shut down.
//! Pass `--forever` to keep the server up on the default port instead.
//!
//! cargo run -p temporal-graph-service --example serve

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use temporal_graph_service::{serve, serve_on, Limits, Registry, ServerConfig, DEFAULT_BIND};

const QUERIES: [&str; 3] = [
    "{ graphs { name countNodes countEdges earliestTime latestTime } }",
    r#"{ graph(name: "emails") { window(start: 1, end: 3) { edges { items { src dst } } } } }"#,
    r#"{ graph(name: "transactions") { algorithms { pagerank(topK: 3) { node score } } } }"#,
];

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    if std::env::args().any(|a| a == "--forever") {
        let config = ServerConfig::new(data);
        println!("serving on http://{DEFAULT_BIND}/graphql");
        return Ok(serve(config).await?);
    }

    let registry = Arc::new(Registry::from_dir(&data)?);
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let base = format!("http://{}", listener.local_addr()?);
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(serve_on(listener, registry, Limits::default(), async {
        let _ = stopped.await;
    }));

    let client = reqwest::Client::new();
    let health: Value = client.get(format!("{base}/health")).send().await?.json().await?;
    println!("health: {health}");
    for query in QUERIES {
        let reply: Value = client
            .post(format!("{base}/graphql"))
            .json(&json!({ "query": query }))
            .send()
            .await?
            .json()
            .await?;
        println!("\n{query}\n{}", serde_json::to_string_pretty(&reply)?);
    }
    let _ = stop.send(());
    server.await??;
    Ok(())
}
