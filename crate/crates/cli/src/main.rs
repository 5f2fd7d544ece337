use clap::Parser;
use rabkit::{main_with, Cli, THREADS_VAR};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var(THREADS_VAR).ok();
    let mut stdout = std::io::stdout();
    match main_with(&cli, threads.as_deref(), &mut stdout) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("rabkit: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
