fn main() {
    std::process::exit(ghz_clifford::cli::run());
}
