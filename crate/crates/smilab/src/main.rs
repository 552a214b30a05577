use std::process::ExitCode;

use clap::Parser;
use smilab::cli::{execute, Cli};

fn main() -> ExitCode {
    execute(&Cli::parse())
}
