use std::process::ExitCode;

use clap::Parser;
use metafl::cli::{run_campaign, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    let config = match args.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_campaign(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &config.out {
        Some(path) => {
            if let Err(e) = report.write(path) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            let s = &report.summary.all;
            eprintln!("{} checks, {} passed, {} failed (seed {})", s.total, s.passed, s.failed, report.seed());
        }
        None => println!("{}", report.to_json()),
    }
    ExitCode::from(report.exit_code() as u8)
}
