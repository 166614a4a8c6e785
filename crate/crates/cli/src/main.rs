use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use powerset_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.to_spec().and_then(|spec| run(&spec));
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(&out.bytes).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("powerset: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
