use clap::Parser;

fn main() {
    let cli = esscoh_cli::Cli::parse();
    let code = esscoh_cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
