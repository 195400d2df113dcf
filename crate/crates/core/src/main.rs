use clap::Parser;

fn main() {
    let cli = ncar::cli::Cli::parse();
    std::process::exit(ncar::cli::execute(cli));
}
