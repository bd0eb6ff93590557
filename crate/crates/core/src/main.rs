use clap::Parser;

fn main() {
    let cli = sigma_dyn::cli::Cli::parse();
    std::process::exit(sigma_dyn::cli::main_with(cli));
}
