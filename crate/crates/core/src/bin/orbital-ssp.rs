fn main() {
    std::process::exit(orbital_ssp::cli::run(std::env::args_os()));
}
