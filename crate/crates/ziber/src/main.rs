fn main() {
    std::process::exit(ziber::cli::run());
}
