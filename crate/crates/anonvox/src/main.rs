use clap::Parser;

fn main() {
    let cli = anonvox::cli::Cli::parse();
    std::process::exit(anonvox::cli::run(cli));
}
