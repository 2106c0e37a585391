fn main() {
    std::process::exit(versa::cli::run(std::env::args_os()));
}
