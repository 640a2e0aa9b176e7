fn main() {
    std::process::exit(casimir_polder::cli::run());
}
