fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let code = minibmc::cli::link_main(argv, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
