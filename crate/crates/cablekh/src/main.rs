fn main() {
    std::process::exit(cablekh::cli::run());
}
