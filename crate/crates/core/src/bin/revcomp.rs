use clap::Parser;
use revcomp::cli::{main_with, Command};

fn main() {
    let cmd = Command::parse();
    std::process::exit(main_with(&cmd));
}
