use clap::Parser;

fn main() {
    let cli = blowfly_cli::Cli::parse();
    std::process::exit(blowfly_cli::run(cli));
}
