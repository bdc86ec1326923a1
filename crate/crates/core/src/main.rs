use clap::Parser;

fn main() {
    let cli = nambu_core::cli::Cli::parse();
    std::process::exit(nambu_core::cli::main_with(cli));
}
