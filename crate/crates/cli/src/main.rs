fn main() {
    std::process::exit(eecrit_cli::main_with_args(std::env::args().collect()));
}
