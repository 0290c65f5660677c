fn main() {
    std::process::exit(bazykin_cli::run(std::env::args().collect()));
}
