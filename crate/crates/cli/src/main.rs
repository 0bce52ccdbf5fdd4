use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod input;
mod report;

use args::Cli;
use report::Verdict;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match commands::run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let body = if cli.json {
                serde_json::to_string_pretty(&report.json).expect("report is valid JSON")
            } else {
                report.text.trim_end().to_string()
            };
            let _ = writeln!(out, "{body}");
            match report.verdict {
                Verdict::NotApplicable => 3,
                Verdict::No if cli.strict => 1,
                _ => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    ExitCode::from(code)
}
