fn main() {
    std::process::exit(derived_hecke::cli::run(std::env::args_os()));
}
