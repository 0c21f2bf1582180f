fn main() {
    std::process::exit(pac_core::cli::run(std::env::args_os()));
}
