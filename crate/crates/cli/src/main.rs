use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use fracheat_cli::{execute, parse_config, RunConfig, StudyKind};

#[derive(Parser)]
#[command(
    name = "fracheat",
    version,
    about = "Rate studies for the fractional heat equation as alpha -> 2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// sup_t ||p_alpha - h||_{H^-s} against 2 - alpha
    KernelRate(Common),
    /// ||u_alpha - u_2|| against 2 - alpha for each configured norm
    SolutionRate(Common),
    /// Mass, positivity, tail, L^p decay, semigroup law, time continuity
    KernelProps(Common),
    /// Linear exactness, self-convergence, conservation, determinism
    SolverValidate(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; defaults are used when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir` in the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Treat warnings as failures
    #[arg(long)]
    strict: bool,
}

fn run(kind: StudyKind, args: Common) -> anyhow::Result<bool> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))?;
            parse_config(&text).with_context(|| format!("in {path:?}"))?
        }
        None => RunConfig::default(),
    };
    match cfg.study {
        Some(k) if k != kind => bail!("config declares study `{}` but `{}` was requested", k.id(), kind.id()),
        _ => cfg.study = Some(kind),
    }
    let out = match args.out.or_else(|| cfg.output_dir.clone()) {
        Some(dir) => dir,
        None => bail!("no output directory: pass --out or set output_dir"),
    };
    if let Some(k) = args.threads {
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global()?;
    }
    eprint!("{}", cfg.echo());
    let report = execute(kind, &cfg, &out, args.strict)?;
    print!("{}", report.summary());
    Ok(report.passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::KernelRate(a) => (StudyKind::KernelRate, a),
        Command::SolutionRate(a) => (StudyKind::SolutionRate, a),
        Command::KernelProps(a) => (StudyKind::KernelProperties, a),
        Command::SolverValidate(a) => (StudyKind::SolverValidate, a),
    };
    match run(kind, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
