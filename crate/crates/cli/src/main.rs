mod cli;
mod config;
mod report;
mod run;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use cli::Cli;
use report::{Output, SCHEMA_VERSION};

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    schema_version: u32,
    error: ErrorBody<'a>,
}

fn report_error(kind: &str, message: String, code: u8) -> ExitCode {
    let doc = ErrorDoc { schema_version: SCHEMA_VERSION, error: ErrorBody { kind, message } };
    let text = serde_json::to_string(&doc).unwrap_or_else(|_| "{}".into());
    let _ = writeln!(std::io::stderr(), "{text}");
    ExitCode::from(code)
}

fn emit(cli: &Cli, out: &Output) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    if cli.json {
        stdout.write_all(out.json.as_bytes())?;
    } else {
        stdout.write_all(out.table.as_bytes())?;
    }
    stdout.flush()?;
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let slug = out.slug();
        fs::write(dir.join(format!("{slug}.json")), &out.json)?;
        fs::write(dir.join(format!("{slug}.txt")), &out.table)?;
        for (name, bytes) in &out.files {
            fs::write(dir.join(name), bytes)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match config::merge(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => return report_error("config", format!("{e:#}"), 1),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let _ = writeln!(std::io::stderr(), "{}", msg.trim_end());
            return report_error("usage", msg.lines().next().unwrap_or("").to_string(), 1);
        }
    };
    if let Some(j) = cli.jobs {
        let built = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
        if j == 0 || built.is_err() {
            return report_error("invalid_input", format!("bad --jobs value {j}"), 1);
        }
    }
    let out = match run::run(&cli.cmd) {
        Ok(o) => o,
        Err(e) => {
            let code = run::error_code(&e) as u8;
            return report_error(run::error_kind(&e), format!("{e:#}"), code);
        }
    };
    if let Err(e) = emit(&cli, &out) {
        return report_error("io", format!("{e:#}"), 1);
    }
    match out.pass {
        Some(false) => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    }
}
