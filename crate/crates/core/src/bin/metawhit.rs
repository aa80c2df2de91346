use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use metawhit::cli::{init_workers, run, Cli, JobConfig};

fn main() -> ExitCode {
    let (kind, flags) = Cli::parse().command.split();
    let result = init_workers().and_then(|_| JobConfig::from_flags(&flags)).and_then(|cfg| Ok((run(kind, &cfg)?, cfg)));
    let (out, cfg) = match result {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&out.text, cfg.output.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if out.invariant_failure {
        eprintln!("invariant check failed");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

fn emit(text: &str, path: Option<&std::path::Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}
