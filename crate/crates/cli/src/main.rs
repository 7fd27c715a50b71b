use std::process::ExitCode;

use clap::Parser;
use qba_cli::{run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    if let Ok(v) = std::env::var("QBA_THREADS") {
        match v.parse::<usize>() {
            Ok(t) if t > 0 => {
                // Only fails if a pool already exists, which cannot happen here.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global();
            }
            _ => {
                eprintln!("qba: ignoring QBA_THREADS={v:?} (expected a positive integer)");
            }
        }
    }

    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("qba: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };

    let written = match &cli.out {
        Some(path) => std::fs::write(path, &report.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{}", report.text);
            Ok(())
        }
    };
    if let Err(msg) = written {
        eprintln!("qba: {msg}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(report.exit_code as u8)
}
