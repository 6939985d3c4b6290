use std::process::ExitCode;

use agp_cli::args::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    run(Cli::parse())
}
