fn main() {
    std::process::exit(treefold::run_cli());
}
