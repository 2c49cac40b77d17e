fn main() {
    std::process::exit(swnet::cli::run());
}
