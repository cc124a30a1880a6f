fn main() {
    std::process::exit(benchrel_cli::run(std::env::args_os()));
}
