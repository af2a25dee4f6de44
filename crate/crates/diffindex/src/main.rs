fn main() {
    std::process::exit(diffindex::cli::run());
}
