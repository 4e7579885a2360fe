use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lambda_forms::cli::{self, CliConfig, CliOutput};

fn main() -> ExitCode {
    let out = match CliConfig::try_parse() {
        Ok(cfg) => {
            let out = cli::execute(&cfg);
            if let (Some(path), Some(json)) = (&cfg.output, &out.json) {
                let text = serde_json::to_string_pretty(json).expect("json");
                if let Err(e) = std::fs::write(path, text + "\n") {
                    eprintln!("{}: {e}", path.display());
                    return ExitCode::from(cli::EXIT_MALFORMED as u8);
                }
                CliOutput { json: None, ..out }
            } else {
                out
            }
        }
        Err(e) => e.exit(),
    };
    if let Some(json) = &out.json {
        let mut stdout = std::io::stdout().lock();
        let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(json).expect("json"));
    }
    if !out.message.is_empty() {
        eprintln!("{}", out.message);
    }
    ExitCode::from(out.code as u8)
}
