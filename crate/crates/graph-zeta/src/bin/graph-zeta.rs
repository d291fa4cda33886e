fn main() {
    std::process::exit(graph_zeta::cli::run());
}
