//! `walshctl`: drives the controller model from a flat run file and writes
//! CSV traces, JSON reports and SVG plots.

mod commands;
mod config;
mod figures;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Artifact, Failure, Format, Output};
use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "walshctl", version, about = "Walsh-basis waveform controller model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run file with `section.key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for artifacts; created if missing.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Overrides `sid.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Artifact formats; repeat for several. Defaults depend on the command.
    #[arg(long, global = true, value_enum)]
    format: Vec<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Sampled Walsh and Rademacher waveforms.
    Gen,
    /// Timing Sequencer alone.
    Timing,
    /// Full output pipeline: sequencer, modulation generator, synthesizer.
    Synth,
    /// Qubit sensing plus Walsh system identification.
    Sid,
    /// Latency comparison, payload and resource estimates.
    Bench,
    /// Regenerates every plot.
    Figures,
    /// Checks the run file and prints the normalized values.
    Validate,
}

impl Command {
    fn default_formats(self) -> &'static [Format] {
        match self {
            Command::Gen | Command::Timing | Command::Synth => &[Format::Csv],
            Command::Sid | Command::Bench => &[Format::Json],
            Command::Figures => &[Format::Svg],
            Command::Validate => &[],
        }
    }
}

fn load(path: Option<&Path>, seed: Option<u64>) -> Result<RunConfig, Failure> {
    let text = match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Failure::Precondition(format!("cannot read config {}: {e}", p.display())))?,
        None => String::new(),
    };
    let raw = config::parse(&text).map_err(Failure::Config)?;
    let cfg = config::validate(&raw).map_err(Failure::Config)?;
    Ok(config::resolve_paths(cfg, path.and_then(Path::parent)).with_seed(seed))
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let cfg = load(cli.config.as_deref(), cli.seed)?;
    let mut formats = if cli.format.is_empty() { cli.command.default_formats().to_vec() } else { cli.format.clone() };
    formats.sort();
    formats.dedup();
    if cli.command == Command::Figures && formats != [Format::Svg] {
        return Err(Failure::Config(vec!["figures only produces --format svg".into()]));
    }
    match cli.command {
        Command::Gen => commands::gen(&cfg, &formats),
        Command::Timing => commands::timing(&cfg, &formats),
        Command::Synth => commands::synth(&cfg, &formats),
        Command::Sid => commands::sid(&cfg, &formats),
        Command::Bench => commands::bench(&cfg, &formats),
        Command::Figures => figures::figures(&cfg),
        Command::Validate => Ok(Output { artifacts: Vec::new(), summary: cfg.echo() }),
    }
}

/// Writes every artifact or none: files are staged under temporary names and
/// renamed only once all of them exist.
fn write_all(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, Failure> {
    if artifacts.is_empty() {
        return Ok(Vec::new());
    }
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let staged: Vec<(PathBuf, PathBuf)> =
        artifacts.iter().map(|a| (dir.join(format!(".{}.partial", a.name)), dir.join(&a.name))).collect();
    let cleanup = |staged: &[(PathBuf, PathBuf)]| {
        for (tmp, _) in staged {
            let _ = fs::remove_file(tmp);
        }
    };
    for (a, (tmp, _)) in artifacts.iter().zip(&staged) {
        if let Err(e) = fs::write(tmp, &a.bytes) {
            cleanup(&staged);
            return Err(Failure::Io(format!("{}: {e}", tmp.display())));
        }
    }
    for (tmp, path) in &staged {
        if let Err(e) = fs::rename(tmp, path) {
            cleanup(&staged);
            return Err(Failure::Io(format!("{}: {e}", path.display())));
        }
    }
    Ok(staged.into_iter().map(|(_, p)| p).collect())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = execute(&cli).and_then(|out| write_all(&cli.out_dir, &out.artifacts).map(|paths| (out, paths)));
    match result {
        Ok((out, paths)) => {
            // a closed pipe is not an error once the artifacts exist
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.summary.as_bytes());
            for p in paths {
                let _ = writeln!(stdout, "wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprint!("walshctl: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
