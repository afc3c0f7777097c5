fn main() {
    std::process::exit(qstoch_cli::run());
}
