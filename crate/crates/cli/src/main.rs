//! `regrep`: command-line front end for `regrep-core`.
//!
//! Exit status is 0 on success, 1 for malformed input and 2 when a
//! well-formed request fails in the mathematics (undecidable dominance, zero
//! denominators at every requested n, divergence). Data goes to standard
//! output or `--output`; diagnostics go to standard error.

mod args;
mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Format};
use config::FileConfig;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }

    /// Classifies a library error raised while handling parameter `param`.
    pub fn from_core(param: &str, e: regrep_core::Error) -> Self {
        let msg = if param.is_empty() {
            e.to_string()
        } else {
            format!("--{param}: {e}")
        };
        if e.is_usage() {
            CliError::Usage(msg)
        } else {
            CliError::Domain(msg)
        }
    }
}

/// Resolved global settings plus access to config-file defaults.
pub struct Ctx {
    pub file: FileConfig,
    pub format: Format,
    pub precision_bits: u32,
    pub jobs: Option<usize>,
    pub output: Option<PathBuf>,
    pub time: bool,
}

impl Ctx {
    /// Command-line value, else config-file value.
    pub fn opt(&self, cli: Option<&str>, key: &str) -> Result<Option<String>, CliError> {
        match cli {
            Some(v) => Ok(Some(v.to_string())),
            None => self.file.get(key),
        }
    }

    pub fn req(&self, cli: Option<&str>, key: &str) -> Result<String, CliError> {
        self.opt(cli, key)?
            .ok_or_else(|| CliError::Usage(format!("missing required parameter --{key}")))
    }

    pub fn parsed<T: std::str::FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.file.get(key)? {
            None => Ok(None),
            Some(s) => s
                .trim()
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("--{key}: cannot parse {s:?}: {e}"))),
        }
    }
}

fn resolve(cli: &Cli) -> Result<Ctx, CliError> {
    let g = &cli.global;
    let file = match &g.config {
        Some(path) => FileConfig::load(path, cli.command.name())?,
        None => FileConfig::default(),
    };
    let mut ctx = Ctx {
        file,
        format: Format::Csv,
        precision_bits: regrep_core::DEFAULT_PRECISION_BITS,
        jobs: None,
        output: None,
        time: g.time,
    };
    ctx.format = match (g.format, ctx.file.get("format")?) {
        (Some(f), _) => f,
        (None, None) => Format::Csv,
        (None, Some(s)) => match s.as_str() {
            "csv" => Format::Csv,
            "pretty" => Format::Pretty,
            other => return Err(CliError::Usage(format!("--format: expected csv or pretty, found {other:?}"))),
        },
    };
    if let Some(bits) = ctx.parsed(g.precision_bits, "precision-bits")? {
        if bits < 64 {
            return Err(CliError::Usage(format!("--precision-bits: must be at least 64, found {bits}")));
        }
        ctx.precision_bits = bits;
    }
    ctx.jobs = ctx.parsed(g.jobs, "jobs")?;
    if ctx.jobs == Some(0) {
        return Err(CliError::Usage("--jobs: must be at least 1".into()));
    }
    ctx.output = match &g.output {
        Some(p) => Some(p.clone()),
        None => ctx.file.get("output")?.map(PathBuf::from),
    };
    if !ctx.time {
        ctx.time = ctx.file.get_bool("time")?.unwrap_or(false);
    }
    Ok(ctx)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let ctx = resolve(&cli)?;
    if let Some(j) = ctx.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    }
    let result = commands::dispatch(&cli.command, &ctx);
    if ctx.time {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    let outcome = result?;
    match &ctx.output {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| CliError::Usage(format!("--output {}: {e}", path.display())))?,
        None => print!("{}", outcome.text),
    }
    outcome.deferred.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
