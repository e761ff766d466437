fn main() {
    std::process::exit(fraclap::cli::run());
}
