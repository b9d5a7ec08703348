mod args;
mod cache;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use cache::Cache;
use commands::{execute, Failure};
use lgspin_core::InvertiblePolynomial;

fn usage(msg: &str) -> ExitCode {
    eprintln!("usage error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            return usage("--threads must be positive");
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: {e}");
        }
    }
    let Some(text) = cli.command.poly().text() else {
        return usage("a polynomial is required (positional or --poly)");
    };
    let w = match InvertiblePolynomial::parse(text) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let cache = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => match Cache::new(dir) {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("warning: cache disabled ({}: {e})", dir.display());
                None
            }
        },
        _ => None,
    };
    let key = Cache::key(&[
        &format!("{:?}", w.matrix().rows()),
        &format!("{:?}", cli.command.without_poly()),
        if cli.json { "json" } else { "text" },
    ]);

    let output = match cache.as_ref().and_then(|c| c.get(&key)) {
        Some(hit) => hit,
        None => match execute(&w, &cli.command) {
            Ok(report) => {
                let out = report.render(cli.json);
                if let Some(c) = &cache {
                    if let Err(e) = c.put(&key, &out) {
                        eprintln!("warning: could not write cache entry: {e}");
                    }
                }
                out
            }
            Err(Failure::Usage(msg)) => return usage(&msg),
            Err(Failure::Domain(e)) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
    };
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(output.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
