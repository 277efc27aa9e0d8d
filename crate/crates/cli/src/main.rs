use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hybound::commands::{self, Suite};
use hybound::manifest::{manifest_path, RunManifest};
use hybound::{color_enabled, load_config, paint, CliError};

#[derive(Parser)]
#[command(name = "hybound", version, about = "Generalization bounds and checks for hybrid quantum-classical models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the generalization bound of the configured class (JSON).
    Bound {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the metric entropies over a log-spaced range of resolutions (CSV).
    EntropyCurve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        eps_min: f64,
        #[arg(long)]
        eps_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON report destination, stdout by default.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train students on teacher data for every (seed, N) and compare gaps to the bound (CSV + manifest).
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to the `output` field of the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => io::stdout().write_all(bytes).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Bound { config, out } => {
            let cfg = load_config(&config)?;
            let report = commands::bound(&cfg)?;
            emit(out.as_deref(), commands::to_json(&report)?.as_bytes())?;
            Ok(true)
        }
        Command::EntropyCurve {
            config,
            eps_min,
            eps_max,
            steps,
            out,
        } => {
            let cfg = load_config(&config)?;
            let points = commands::entropy_curve(&cfg, eps_min, eps_max, steps)?;
            let mut buf = Vec::new();
            commands::write_curve(&mut buf, &points)?;
            emit(out.as_deref(), &buf)?;
            Ok(true)
        }
        Command::Verify { suite, seed, out } => {
            let report = commands::verify(suite, seed)?;
            emit(out.as_deref(), commands::to_json(&report)?.as_bytes())?;
            let color = color_enabled(io::stderr().is_terminal());
            for s in &report.suites {
                for c in &s.checks {
                    let tag = if c.passed {
                        paint("PASS", "32", color)
                    } else {
                        paint("FAIL", "31", color)
                    };
                    eprintln!(
                        "{tag} {}/{}: {} trials, {} violations (allowed {}), {}",
                        s.suite, c.name, c.trials, c.violations, c.allowed_violations, c.detail
                    );
                }
            }
            Ok(report.passed)
        }
        Command::Experiment { config, out } => {
            let cfg = load_config(&config)?;
            let out = out
                .or_else(|| cfg.output.as_ref().map(PathBuf::from))
                .ok_or_else(|| CliError::Usage("no --out given and the config has no `output`".into()))?;
            let records = commands::experiment(&cfg)?;
            let file = fs::File::create(&out).map_err(|e| CliError::io(&out, e))?;
            commands::write_records(io::BufWriter::new(file), &records)?;
            let args: Vec<String> = std::env::args().skip(1).collect();
            let manifest = RunManifest::new("experiment", args, &cfg, &records);
            let mpath = manifest_path(&out);
            fs::write(&mpath, commands::to_json(&manifest)?).map_err(|e| CliError::io(&mpath, e))?;
            if !manifest.diverged.is_empty() {
                eprintln!("warning: training diverged in {} cells, see {}", manifest.diverged.len(), mpath.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let color = color_enabled(io::stderr().is_terminal());
            eprintln!("{} {e}", paint("error:", "31", color));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
