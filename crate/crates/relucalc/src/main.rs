use clap::Parser;
use relucalc::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (text, result) = run(&cli.command);
    print!("{text}");
    if let Err(e) = result {
        eprintln!("relucalc: {e}");
        std::process::exit(e.exit_code());
    }
}
