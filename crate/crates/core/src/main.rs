fn main() {
    let code = trapcool::cli::run(std::env::args());
    std::process::exit(code);
}
