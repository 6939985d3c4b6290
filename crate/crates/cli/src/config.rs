use std::path::PathBuf;
use std::str::FromStr;

use agp_core::rdm::Sector;
use agp_core::statevector::{max_qubits, NoiseModel};
use clap::ValueEnum;

use crate::usage;

pub const DEFAULT_SHOTS: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Shots,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// One entry of a `--sectors` list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorItem {
    Ensemble,
    /// Every even particle number `0, 2, ..., r`.
    AllEven,
    Particles(usize),
}

/// Which rows to produce for each `r`, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorSpec(pub Vec<SectorItem>);

impl SectorSpec {
    pub fn ensemble() -> Self {
        SectorSpec(vec![SectorItem::Ensemble])
    }

    pub fn all_even() -> Self {
        SectorSpec(vec![SectorItem::AllEven])
    }

    pub fn particles(list: &[usize]) -> Self {
        SectorSpec(list.iter().map(|&n| SectorItem::Particles(n)).collect())
    }

    pub fn sectors(&self, r: usize) -> Vec<Sector> {
        self.0
            .iter()
            .flat_map(|item| match *item {
                SectorItem::Ensemble => vec![Sector::Ensemble],
                SectorItem::AllEven => (0..=r).step_by(2).map(Sector::Particles).collect(),
                SectorItem::Particles(n) => vec![Sector::Particles(n)],
            })
            .collect()
    }
}

impl FromStr for SectorSpec {
    type Err = anyhow::Error;

    /// Comma list of `ensemble`, `all-even` and particle numbers.
    fn from_str(s: &str) -> anyhow::Result<Self> {
        let items = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| match t {
                "ensemble" => Ok(SectorItem::Ensemble),
                "all-even" => Ok(SectorItem::AllEven),
                n => n.parse().map(SectorItem::Particles).map_err(|_| usage(format!("unknown sector {n:?}"))),
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        if items.is_empty() {
            return Err(usage("empty sector list"));
        }
        Ok(SectorSpec(items))
    }
}

/// Parses `"2,4,6"`, `"0..14"` / `"0..=14"` (even steps, inclusive) or a mix.
pub fn parse_r_list(s: &str) -> anyhow::Result<Vec<usize>> {
    let mut out = Vec::new();
    for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| usage(format!("bad qubit count {t:?}")));
        if let Some((a, b)) = token.split_once("..") {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(usage(format!("empty range {token:?}")));
            }
            out.extend((a..=b).step_by(2));
        } else {
            out.push(num(token)?);
        }
    }
    if out.is_empty() {
        return Err(usage("no qubit counts given"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub r_list: Vec<usize>,
    pub mode: Mode,
    /// Shots per measurement setting; ignored in exact mode.
    pub shots: u64,
    pub noise: Option<NoiseModel>,
    pub seed: u64,
    pub sectors: SectorSpec,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            r_list: vec![2],
            mode: Mode::Exact,
            shots: DEFAULT_SHOTS,
            noise: None,
            seed: 0,
            sectors: SectorSpec::ensemble(),
            format: OutputFormat::Csv,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        let max = max_qubits();
        for &r in &self.r_list {
            if r % 2 != 0 {
                return Err(usage(format!("qubit counts must be even, got {r}")));
            }
            if r > max {
                return Err(usage(format!("r={r} exceeds the {max}-qubit capacity (set AGP_MAX_QUBITS to change)")));
            }
        }
        if self.mode == Mode::Shots && self.shots == 0 {
            return Err(usage("shot mode needs at least one shot"));
        }
        if let Some(noise) = &self.noise {
            if self.mode == Mode::Exact {
                return Err(usage("noise options only apply to --mode shots"));
            }
            noise.validate().map_err(|e| usage(e.to_string()))?;
        }
        Ok(())
    }
}
