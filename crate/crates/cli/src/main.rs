use clap::Parser;

fn main() {
    let cli = qgauss_cli::Cli::parse();
    std::process::exit(qgauss_cli::execute(cli));
}
