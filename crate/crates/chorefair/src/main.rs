fn main() {
    std::process::exit(chorefair::cli::run_from(std::env::args_os()));
}
