use qmnls::cli;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let opts = match cli::parse_args(&args) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    };
    if let Err(e) = cli::run(&opts) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
