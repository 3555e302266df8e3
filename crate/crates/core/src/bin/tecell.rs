use clap::Parser;

fn main() {
    let cli = tecell::cli::Cli::parse();
    std::process::exit(tecell::cli::execute(&cli));
}
