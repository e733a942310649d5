fn main() {
    std::process::exit(graph_bandit::cli::main_with_args(std::env::args_os()));
}
