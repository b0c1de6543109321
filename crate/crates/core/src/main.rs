fn main() {
    std::process::exit(codesum::cli::run(std::env::args_os()));
}
