use clap::Parser;
use emergent::cli::{self, Cli};

fn main() {
    let args = cli::normalize_args(std::env::args());
    let parsed = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let code = match cli::run(&parsed, &args).and_then(|out| cli::emit(&parsed, &out)) {
        Ok(()) => cli::EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
