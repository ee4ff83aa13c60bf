fn main() {
    std::process::exit(frameforge::cli::run_from_args());
}
