use std::io::{stderr, stdout};

fn main() {
    let code = impact_vitality::cli::run(std::env::args_os(), &mut stdout().lock(), &mut stderr());
    std::process::exit(code);
}
