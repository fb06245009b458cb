use clap::Parser;

fn main() {
    let cli = ahp_core::cli::Cli::parse();
    let code = ahp_core::cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
