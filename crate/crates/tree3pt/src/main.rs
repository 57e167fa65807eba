fn main() {
    std::process::exit(tree3pt::cli::run(std::env::args()));
}
