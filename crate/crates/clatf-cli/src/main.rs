mod cmd;
mod doc;
mod svg;

use std::io::Read;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use doc::DocError;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match cmd::Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report("usage", &e.to_string());
            return ExitCode::from(2);
        }
    };
    let mut stdin = || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s).map_err(|e| DocError::Malformed(e.to_string()))
    };
    match cmd::run(cli, &argv[1..], &mut stdin) {
        Ok(()) => ExitCode::SUCCESS,
        Err(DocError::Malformed(m)) => {
            report("malformed", &m);
            ExitCode::from(2)
        }
        Err(DocError::Domain(e)) => {
            report("domain", &e.to_string());
            ExitCode::from(1)
        }
    }
}

fn report(kind: &str, message: &str) {
    eprintln!("{}", json!({"error": {"kind": kind, "message": message.trim()}}));
}
