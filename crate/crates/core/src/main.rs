use std::process::ExitCode;

use clap::Parser;

use cstarlab::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let rendered = outcome.render(cli.json);
    print!("{rendered}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &rendered) {
            eprintln!("cannot write {}: {e}", path.display());
        }
    }
    ExitCode::from(outcome.exit as u8)
}
