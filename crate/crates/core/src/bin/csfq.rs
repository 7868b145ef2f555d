fn main() {
    std::process::exit(csfq::cli::run(std::env::args_os()));
}
