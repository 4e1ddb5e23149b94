use clap::Parser;
use cyclorobust_cli::cli::{resolve, Cli};
use cyclorobust_cli::execute;

fn main() {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = resolve(&cli.command).and_then(|cfg| execute(&cfg));
    match result {
        Ok(written) => {
            for f in written.files {
                println!("{}", f.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
