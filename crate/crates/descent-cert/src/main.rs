fn main() {
    let code = descent_cert::cli::main_with_args(std::env::args().skip(1));
    std::process::exit(code);
}
