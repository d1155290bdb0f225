fn main() {
    std::process::exit(balanced_sets::cli::run());
}
