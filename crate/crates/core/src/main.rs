fn main() {
    let code = lambda_taylor::cli::run_cli(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
