use clap::Parser;

fn main() {
    let cli = clustereval::cli::Cli::parse();
    std::process::exit(clustereval::cli::execute(cli));
}
