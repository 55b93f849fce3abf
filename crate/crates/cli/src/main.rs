mod commands;
mod config;
mod error;
mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use commands::{CompareArgs, CurveArgs, FidelityArgs, NoiseLimitArgs, OutputArgs, TraceArgs};
use error::CliError;

/// Few-copy entanglement detection for noisy graph states.
#[derive(Parser, Debug)]
#[command(name = "fewcopy", version)]
struct Cli {
    /// File of `key = value` defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum Command {
    /// Theoretical C_min against the number of copies.
    ConfidenceCurve(CurveArgs),
    /// Simulate one protocol run (or many with --trials).
    Trace(TraceArgs),
    /// Largest white-noise level at which detection is still possible.
    NoiseLimit(NoiseLimitArgs),
    /// Shot cost of a fidelity witness next to the few-copy budget.
    WitnessCompare(CompareArgs),
    /// Fidelity estimate from the success rate of a simulated run.
    Fidelity(FidelityArgs),
    /// Re-run the invocation recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Serialize)]
struct ReplayArgs {
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,

    /// Write to this path instead of the recorded one.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::ConfidenceCurve(_) => "confidence-curve",
            Command::Trace(_) => "trace",
            Command::NoiseLimit(_) => "noise-limit",
            Command::WitnessCompare(_) => "witness-compare",
            Command::Fidelity(_) => "fidelity",
            Command::Replay(_) => "replay",
        }
    }

    fn output(&self) -> Option<&OutputArgs> {
        match self {
            Command::ConfidenceCurve(a) => Some(&a.output),
            Command::Trace(a) => Some(&a.output),
            Command::NoiseLimit(a) => Some(&a.output),
            Command::WitnessCompare(a) => Some(&a.output),
            Command::Fidelity(a) => Some(&a.output),
            Command::Replay(_) => None,
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Trace(a) => Some(a.seed),
            Command::Fidelity(a) => Some(a.seed),
            _ => None,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    command: String,
    /// Full argument list after config expansion; replaying it reproduces the
    /// outputs byte for byte.
    argv: Vec<String>,
    parameters: serde_json::Value,
    rng_seed: Option<u64>,
    version: String,
    outputs: Vec<PathBuf>,
    duration_secs: f64,
}

fn manifest_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    out.with_file_name(format!("{stem}.manifest.json"))
}

fn default_out(command: &str, output: &OutputArgs) -> PathBuf {
    let dir = std::env::var_os("FEWCOPY_OUT_DIR").unwrap_or_else(|| OsString::from("."));
    Path::new(&dir).join(format!("{command}.{}", output.format.extension()))
}

enum Parsed {
    Run(Cli),
    Exit,
}

fn parse(argv: &[String]) -> Result<Parsed, CliError> {
    match Cli::try_parse_from(argv) {
        Ok(cli) => Ok(Parsed::Run(cli)),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            Ok(Parsed::Exit)
        }
        Err(e) => {
            let msg = e.render().to_string();
            let msg = msg.trim_end().trim_start_matches("error: ");
            Err(CliError::Usage(msg.to_owned()))
        }
    }
}

/// Splits off the subcommand and its own arguments, dropping `--config`.
fn subcommand_args(argv: &[String], name: &str) -> Vec<String> {
    let mut rest = Vec::new();
    let mut seen = false;
    let mut iter = argv.iter().skip(1);
    while let Some(a) = iter.next() {
        if a == "--config" {
            iter.next();
        } else if a.starts_with("--config=") {
        } else if !seen && a == name {
            seen = true;
        } else if seen {
            rest.push(a.clone());
        }
    }
    rest
}

fn has_flag(args: &[String], flag: &str) -> bool {
    args.iter()
        .any(|a| a == flag || a.starts_with(&format!("{flag}=")))
}

fn run(argv: Vec<String>) -> Result<(), CliError> {
    let cli = match parse(&argv)? {
        Parsed::Run(cli) => cli,
        Parsed::Exit => return Ok(()),
    };
    let name = cli.command.name();
    if let Command::Replay(r) = &cli.command {
        return replay(r);
    }

    let mut sub = subcommand_args(&argv, name);
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read config {}", path.display()), e))?;
        let settings = config::parse(&text)?;
        let cmd = Cli::command();
        let sc = cmd
            .find_subcommand(name)
            .expect("parsed subcommand exists");
        let mut injected = config::injected_args(&settings, sc, &sub)?;
        injected.append(&mut sub);
        sub = injected;
    }
    let mut effective = vec![name.to_owned()];
    effective.extend(sub);
    execute(effective)
}

/// Runs a fully expanded `[subcommand, args...]` list and writes its manifest.
fn execute(mut effective: Vec<String>) -> Result<(), CliError> {
    let with_bin = |e: &[String]| {
        let mut v = vec!["fewcopy".to_owned()];
        v.extend_from_slice(e);
        v
    };
    let Parsed::Run(cli) = parse(&with_bin(&effective))? else {
        return Ok(());
    };
    if !has_flag(&effective, "--out") {
        let output = cli.command.output().expect("non-replay command");
        effective.push("--out".into());
        effective.push(default_out(cli.command.name(), output).to_string_lossy().into_owned());
    }
    let Parsed::Run(cli) = parse(&with_bin(&effective))? else {
        return Ok(());
    };
    let out = cli
        .command
        .output()
        .and_then(|o| o.out.clone())
        .expect("--out resolved");

    let start = Instant::now();
    let outputs = match &cli.command {
        Command::ConfidenceCurve(a) => commands::confidence_curve_cmd(a, &out)?,
        Command::Trace(a) => commands::trace_cmd(a, &out)?,
        Command::NoiseLimit(a) => commands::noise_limit_cmd(a, &out)?,
        Command::WitnessCompare(a) => commands::witness_compare_cmd(a, &out)?,
        Command::Fidelity(a) => commands::fidelity_cmd(a, &out)?,
        Command::Replay(_) => return Err(CliError::Usage("a manifest cannot replay `replay`".into())),
    };
    let manifest = Manifest {
        command: cli.command.name().to_owned(),
        argv: effective,
        parameters: serde_json::to_value(&cli.command).expect("arguments serialize"),
        rng_seed: cli.command.seed(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        outputs,
        duration_secs: start.elapsed().as_secs_f64(),
    };
    let path = manifest_path(&out);
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(&path, text)
        .map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))?;
    Ok(())
}

fn replay(args: &ReplayArgs) -> Result<(), CliError> {
    let path = &args.manifest;
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read manifest {}", path.display()), e))?;
    let manifest: Manifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: invalid manifest: {e}", path.display())))?;
    let mut argv = manifest.argv;
    if let Some(out) = &args.out {
        let out = out.to_string_lossy().into_owned();
        match argv.iter().position(|a| a == "--out") {
            Some(i) if i + 1 < argv.len() => argv[i + 1] = out,
            _ => {
                argv.retain(|a| !a.starts_with("--out="));
                argv.push("--out".into());
                argv.push(out);
            }
        }
    }
    execute(argv)
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fewcopy: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
