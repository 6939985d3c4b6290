use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use agp_core::statevector::NoiseModel;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{parse_r_list, Mode, OutputFormat, RunConfig, SectorSpec, DEFAULT_SHOTS};
use crate::export::{export, ExportWhat};
use crate::sweep::run_sweep;
use crate::verify::{render_table, run_verify, VerifyOptions};
use crate::{usage, UsageError};

#[derive(Debug, Parser)]
#[command(name = "agp", version, about = "Pairing condensation in prepared AGP states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Largest geminal eigenvalue for a list of register sizes and sectors.
    Sweep(SweepArgs),
    /// Write OpenQASM 2.0 files for the preparation and measurement circuits.
    Export(ExportArgs),
    /// Check the operator algebra against brute-force ground truth.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoisePreset {
    /// p1 = 0.002, p2 = 0.02, readout 0.03 both ways.
    DeviceLike,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Even qubit counts, e.g. "0..14" or "4,8,12".
    #[arg(long, default_value = "0..14")]
    pub r: String,
    /// Comma list of "ensemble", "all-even" and particle numbers.
    #[arg(long, default_value = "ensemble")]
    pub sectors: String,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Shots per measurement setting (shot mode only).
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub noise_preset: Option<NoisePreset>,
    /// Error probability after each single-qubit gate.
    #[arg(long)]
    pub noise_p1: Option<f64>,
    /// Error probability after each multi-qubit gate.
    #[arg(long)]
    pub noise_p2: Option<f64>,
    /// Probability of reading 1 when the qubit is 0.
    #[arg(long)]
    pub noise_readout_01: Option<f64>,
    /// Probability of reading 0 when the qubit is 1.
    #[arg(long)]
    pub noise_readout_10: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t = ExportWhat::All)]
    pub what: ExportWhat,
    /// Target directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest register used by any check.
    #[arg(long, default_value_t = 12)]
    pub r_max: usize,
    #[arg(long, hide = true)]
    pub mutate_sign: bool,
}

impl SweepArgs {
    pub fn to_config(&self) -> anyhow::Result<RunConfig> {
        let mut noise = self.noise_preset.map(|NoisePreset::DeviceLike| NoiseModel::device_like());
        let overrides = [self.noise_p1, self.noise_p2, self.noise_readout_01, self.noise_readout_10];
        if overrides.iter().any(Option::is_some) {
            let base = noise.unwrap_or_default();
            noise = Some(NoiseModel {
                p1: self.noise_p1.unwrap_or(base.p1),
                p2: self.noise_p2.unwrap_or(base.p2),
                readout_01: self.noise_readout_01.unwrap_or(base.readout_01),
                readout_10: self.noise_readout_10.unwrap_or(base.readout_10),
            });
        }
        if self.mode == Mode::Exact && self.shots.is_some() {
            return Err(usage("--shots only applies to --mode shots"));
        }
        let cfg = RunConfig {
            r_list: parse_r_list(&self.r)?,
            mode: self.mode,
            shots: self.shots.unwrap_or(DEFAULT_SHOTS),
            noise,
            seed: self.seed,
            sectors: self.sectors.parse::<SectorSpec>()?,
            format: self.format,
            out: self.out.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn sweep(args: &SweepArgs) -> anyhow::Result<ExitCode> {
    let cfg = args.to_config()?;
    let output = match args.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(|| run_sweep(&cfg))?,
        None => run_sweep(&cfg)?,
    };
    let text = output.render(cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: &VerifyArgs) -> anyhow::Result<ExitCode> {
    let checks = run_verify(VerifyOptions { r_max: args.r_max, mutate_sign: args.mutate_sign })?;
    print!("{}", render_table(&checks));
    match checks.iter().find(|c| !c.passed) {
        Some(first) => {
            eprintln!("first failure: {} (deviation {:.3e})", first.name, first.deviation);
            Ok(ExitCode::FAILURE)
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

/// Dispatches a parsed command line; usage errors map to exit status 2,
/// other failures to 1.
pub fn run(cli: Cli) -> ExitCode {
    let result = match &cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Export(args) => export(args.r, args.what, &args.out).map(|paths| {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }),
        Command::Verify(args) => verify(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
