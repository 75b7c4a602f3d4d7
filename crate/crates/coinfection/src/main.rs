use clap::Parser;

fn main() {
    let cli = coinfection::cli::Cli::parse();
    if let Err(e) = coinfection::cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
