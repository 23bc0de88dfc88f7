fn main() {
    std::process::exit(regrkit::cli::run(std::env::args_os()));
}
