fn main() {
    std::process::exit(temporal_graph_cli::run(std::env::args_os()));
}
