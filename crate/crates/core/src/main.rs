use clap::Parser;
use vcell::cli::{execute, Cli};

fn main() -> anyhow::Result<()> {
    execute(Cli::parse())
}
