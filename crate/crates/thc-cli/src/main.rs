fn main() {
    std::process::exit(thc_cli::cli::run(std::env::args_os()));
}
