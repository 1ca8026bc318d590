use clap::Parser;

fn main() {
    let cli = toroidal_cli::Cli::parse();
    std::process::exit(toroidal_cli::run(cli));
}
