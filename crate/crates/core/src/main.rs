fn main() {
    let code = semigaps::cli::run(std::env::args_os());
    std::process::exit(code);
}
