fn main() {
    std::process::exit(scpa_core::cli::run(std::env::args_os()));
}
