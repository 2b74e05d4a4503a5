use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use adsgeo::{run, table_paths, write_tables, Command, ConfigError, RunConfig};

#[derive(Parser)]
#[command(
    name = "adsgeo",
    version,
    about = "Numerical checks for asymptotically AdS uniqueness arguments"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Einstein equations and curvature identities on catalog metrics.
    VerifyEinstein(Opts),
    /// Fefferman-Graham expansion: recursion, gauge and mass aspect.
    FgExpand(Opts),
    /// Static vacuum system: residuals, mass aspect, shooting, horizons.
    Static(Opts),
    /// Killing fields, twist and the twist identities.
    Twist(Opts),
    /// Conformal compactification of the static slice.
    Compactify(Opts),
    /// The Obata equation on hyperbolic space.
    Obata(Opts),
    /// Every check above.
    All(Opts),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Clone)]
struct Opts {
    /// Boundary dimension n (space-time dimension n + 1).
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Restrict to one catalog metric.
    #[arg(long)]
    metric: Option<String>,
    /// Parameter override `key=value`; keys M, lambda, V0, N, eps, t0.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the command's numeric table(s) as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Tolerance override `check=value`; a dotted prefix covers a family.
    #[arg(long = "tol", value_name = "CHECK=VALUE")]
    tolerances: Vec<String>,
}

fn split(cmd: &Cmd) -> (Command, &Opts) {
    match cmd {
        Cmd::VerifyEinstein(o) => (Command::VerifyEinstein, o),
        Cmd::FgExpand(o) => (Command::FgExpand, o),
        Cmd::Static(o) => (Command::Static, o),
        Cmd::Twist(o) => (Command::Twist, o),
        Cmd::Compactify(o) => (Command::Compactify, o),
        Cmd::Obata(o) => (Command::Obata, o),
        Cmd::All(o) => (Command::All, o),
    }
}

fn threads() -> Result<(), ConfigError> {
    let Ok(v) = std::env::var("ADSGEO_THREADS") else {
        return Ok(());
    };
    let k: usize = v
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| ConfigError(format!("ADSGEO_THREADS={v}: expected a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| ConfigError(e.to_string()))
}

fn emit(report: &adsgeo::Report, opts: &Opts) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match &opts.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    match opts.format {
        Format::Json => sink.write_all(report.to_json().as_bytes())?,
        Format::Csv => report.write_entries_csv(&mut sink).map_err(io::Error::other)?,
    }
    sink.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = split(&cli.command);
    let prepared = threads().and_then(|()| {
        let cfg = RunConfig::parse(
            command,
            opts.n,
            opts.metric.as_deref(),
            &opts.params,
            opts.seed,
            &opts.tolerances,
        )?;
        let dests = opts.csv.as_deref().map(|p| table_paths(command, p)).transpose()?;
        Ok((cfg, dests))
    });
    let (cfg, dests) = match prepared {
        Ok(x) => x,
        Err(e) => {
            eprintln!("adsgeo: {e}");
            return ExitCode::from(2);
        }
    };
    let report = run(command, &cfg);
    let written = emit(&report, opts).and_then(|()| match &dests {
        Some(d) => write_tables(&report, d),
        None => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("adsgeo: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}
