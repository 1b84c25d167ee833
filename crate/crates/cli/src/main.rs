use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use irrcert_cli::{execute, render_text, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("irrcert: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match cli.opts.json.as_deref() {
        Some(p) if p.as_os_str() == "-" => {
            let _ = stdout.write_all(report.to_json().as_bytes());
        }
        Some(p) => {
            if let Err(e) = std::fs::write(p, report.to_json()) {
                eprintln!("irrcert: cannot write {}: {e}", p.display());
                return ExitCode::from(73);
            }
            let _ = stdout.write_all(render_text(&report).as_bytes());
        }
        None => {
            let _ = stdout.write_all(render_text(&report).as_bytes());
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
