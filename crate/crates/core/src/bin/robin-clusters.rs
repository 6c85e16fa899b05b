fn main() {
    std::process::exit(robin_clusters::cli::run(std::env::args_os()));
}
