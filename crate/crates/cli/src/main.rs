fn main() {
    std::process::exit(herding_cli::run());
}
