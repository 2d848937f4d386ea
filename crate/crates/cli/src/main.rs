use clap::Parser;
use polaritykit_cli::run::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    std::process::exit(execute(cli, &mut stdout, &mut stderr));
}
