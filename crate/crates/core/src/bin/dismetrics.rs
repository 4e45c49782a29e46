fn main() {
    std::process::exit(dismetrics::cli::run(std::env::args_os()));
}
