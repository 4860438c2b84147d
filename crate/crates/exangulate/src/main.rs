fn main() {
    std::process::exit(exangulate::cli::run());
}
