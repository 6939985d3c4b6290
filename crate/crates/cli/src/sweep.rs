use std::fmt::Write;

use agp_core::pairing::{plan_settings, EntryEstimate};
use agp_core::rdm::{
    assemble_exact, assemble_from_shots, condensation_verdict, yang_coleman_bound, CondensationReport, GeminalMatrix,
    Sector,
};
use agp_core::statevector::{agp_circuit, prepare_agp, sample_circuit, Histogram, NoiseModel};
use agp_core::AgpError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Mode, OutputFormat, RunConfig};

pub const CSV_HEADER: &str = "r,sector,lambda_D,bound,condensed,stderr";

/// One `(r, sector)` row. `report` is `None` when the sector carries no
/// weight (or no shot survived post-selection).
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub r: usize,
    pub sector: Sector,
    pub report: Option<CondensationReport>,
}

impl Row {
    pub fn lambda_d(&self) -> Option<f64> {
        self.report.as_ref().map(|rep| rep.lambda_d)
    }

    pub fn bound(&self) -> Option<f64> {
        match (&self.report, self.sector) {
            (Some(rep), _) => rep.bound,
            (None, Sector::Particles(n)) => yang_coleman_bound(n, self.r).ok(),
            (None, Sector::Ensemble) => None,
        }
    }

    pub fn condensed(&self) -> bool {
        self.report.as_ref().is_some_and(|rep| rep.condensed)
    }
}

#[derive(Serialize)]
struct RowRecord {
    r: usize,
    sector: Sector,
    #[serde(rename = "lambda_D")]
    lambda_d: Option<f64>,
    bound: Option<f64>,
    condensed: bool,
    stderr: Option<f64>,
}

impl From<&Row> for RowRecord {
    fn from(row: &Row) -> Self {
        RowRecord {
            r: row.r,
            sector: row.sector,
            lambda_d: row.lambda_d(),
            bound: row.bound(),
            condensed: row.condensed(),
            stderr: row.report.as_ref().and_then(|rep| rep.lambda_stderr),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<Row>,
    pub warnings: Vec<String>,
}

impl SweepOutput {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => render_csv(&self.rows),
            OutputFormat::Json => render_json(&self.rows),
        }
    }
}

pub fn render_csv(rows: &[Row]) -> String {
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let rec = RowRecord::from(row);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            rec.r,
            rec.sector,
            cell(rec.lambda_d),
            cell(rec.bound),
            rec.condensed,
            cell(rec.stderr)
        );
    }
    out
}

pub fn render_json(rows: &[Row]) -> String {
    let records: Vec<RowRecord> = rows.iter().map(RowRecord::from).collect();
    let mut out = serde_json::to_string_pretty(&records).expect("rows serialize");
    out.push('\n');
    out
}

/// Runs every `(r, sector)` row of the configuration.
///
/// Rows sharing an `r` share one set of histograms in shot mode; that group
/// is seeded with `seed + index of its first row`, so results do not
/// depend on how rayon schedules the groups.
pub fn run_sweep(cfg: &RunConfig) -> anyhow::Result<SweepOutput> {
    cfg.validate()?;
    let mut groups = Vec::new();
    let mut first_row = 0u64;
    for &r in &cfg.r_list {
        let sectors = cfg.sectors.sectors(r);
        groups.push((r, sectors.clone(), cfg.seed.wrapping_add(first_row)));
        first_row += sectors.len() as u64;
    }
    let results: Vec<anyhow::Result<Vec<Row>>> = groups
        .par_iter()
        .map(|(r, sectors, seed)| match cfg.mode {
            Mode::Exact => exact_rows(*r, sectors),
            Mode::Shots => shot_rows(*r, sectors, cfg, *seed),
        })
        .collect();
    let mut rows = Vec::new();
    for group in results {
        rows.extend(group?);
    }
    let warnings = rows
        .iter()
        .filter(|row| row.report.is_none())
        .map(|row| format!("r={} sector {}: no weight in this sector, row left empty", row.r, row.sector))
        .collect();
    Ok(SweepOutput { rows, warnings })
}

fn verdict(r: usize, sector: Sector, k: &GeminalMatrix) -> anyhow::Result<Row> {
    Ok(Row { r, sector, report: Some(condensation_verdict(r, sector, k)?) })
}

/// Rows of the empty register: only the vacuum exists.
fn empty_register_rows(sectors: &[Sector]) -> anyhow::Result<Vec<Row>> {
    sectors
        .iter()
        .map(|&sector| match sector {
            Sector::Ensemble | Sector::Particles(0) => verdict(0, sector, &GeminalMatrix::zeros(0)),
            _ => Ok(Row { r: 0, sector, report: None }),
        })
        .collect()
}

fn exact_rows(r: usize, sectors: &[Sector]) -> anyhow::Result<Vec<Row>> {
    if r == 0 {
        return empty_register_rows(sectors);
    }
    let state = prepare_agp(r)?;
    sectors
        .iter()
        .map(|&sector| match sector {
            Sector::Ensemble => verdict(r, sector, &assemble_exact(&state)?),
            Sector::Particles(n) if n > r => Ok(Row { r, sector, report: None }),
            Sector::Particles(n) => match state.project_particle_number(n)? {
                (Some(projected), _) => verdict(r, sector, &assemble_exact(&projected)?),
                (None, _) => Ok(Row { r, sector, report: None }),
            },
        })
        .collect()
}

fn shot_rows(r: usize, sectors: &[Sector], cfg: &RunConfig, seed: u64) -> anyhow::Result<Vec<Row>> {
    if r == 0 {
        return empty_register_rows(sectors);
    }
    let geminals = estimate_geminals(r, sectors, cfg.shots, cfg.noise.as_ref(), seed)?;
    sectors
        .iter()
        .zip(geminals)
        .map(|(&sector, k)| match k {
            Some(k) => verdict(r, sector, &k),
            None => Ok(Row { r, sector, report: None }),
        })
        .collect()
}

/// Shot-based geminal matrices for several sectors of one register.
///
/// The preparation circuit is sampled once per measurement setting from
/// the vacuum (so gate noise hits preparation and rotation alike), and
/// every sector is post-selected from the same histograms. A sector with
/// no surviving shots in some setting yields `None`.
pub fn estimate_geminals(
    r: usize,
    sectors: &[Sector],
    shots: u64,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> anyhow::Result<Vec<Option<GeminalMatrix>>> {
    let settings = plan_settings(r)?;
    let prep = agp_circuit(r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let setting_seeds: Vec<u64> = settings.iter().map(|_| rng.gen()).collect();
    let histograms: Vec<Histogram> = settings
        .par_iter()
        .zip(&setting_seeds)
        .map(|(setting, &s)| {
            let circuit = prep.clone().then(setting.rotation())?;
            sample_circuit(&circuit, shots, noise, s)
        })
        .collect::<Result<_, AgpError>>()?;
    sectors
        .iter()
        .map(|&sector| {
            let filter = match sector {
                Sector::Ensemble => None,
                Sector::Particles(n) => Some(n),
            };
            let mut estimates: Vec<EntryEstimate> = Vec::new();
            for (setting, hist) in settings.iter().zip(&histograms) {
                match setting.estimate(hist, filter) {
                    Ok(e) => estimates.extend(e),
                    Err(AgpError::EmptySector(_)) => return Ok(None),
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(Some(assemble_from_shots(r / 2, &estimates)?))
        })
        .collect()
}
