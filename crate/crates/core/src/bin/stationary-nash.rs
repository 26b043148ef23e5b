use clap::Parser;
use stationary_nash::harness::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
