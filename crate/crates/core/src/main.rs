fn main() {
    let code = riesz_core::cli::run(std::env::args_os());
    riesz_core::cli::flush();
    std::process::exit(code);
}
