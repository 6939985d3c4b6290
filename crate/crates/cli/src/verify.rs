//! Cross-checks of the Pauli-algebra path against brute-force ground truth.

use std::fmt::Write;

use agp_core::oracle::{
    brute_force_2rdm, closed_form_lambda, dense_pair_creation, dense_pair_hopper, geminal_block_of, ORACLE_MAX_QUBITS,
};
use agp_core::pairing::{
    diagonal_pair_occupation, jw_pair_creation, pauli_expansion_pair_hopper, plan_settings, Component, PairIndex,
};
use agp_core::pauli::PauliString;
use agp_core::rdm::{assemble_exact, assemble_from_shots, largest_eigenvalue, GeminalMatrix, Sector};
use agp_core::statevector::{exact_distribution, prepare_agp, StateVector};
use agp_core::Complex64;
use nalgebra::DMatrix;

use crate::usage;

pub const TOLERANCE: f64 = 1e-10;

/// Largest register for checks that build dense `2^r x 2^r` operators.
const DENSE_MAX_QUBITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Largest register any check may use.
    pub r_max: usize,
    /// Flip the sign of one hopper expansion coefficient before checking,
    /// to confirm the suite notices.
    pub mutate_sign: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { r_max: 12, mutate_sign: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub passed: bool,
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn rebuild(r: usize, expansion: &[(f64, PauliString)]) -> DMatrix<Complex64> {
    let dim = 1 << r;
    expansion
        .iter()
        .fold(DMatrix::zeros(dim, dim), |acc, (c, p)| acc + p.dense() * Complex64::new(*c, 0.0))
}

fn top(k: &GeminalMatrix) -> anyhow::Result<f64> {
    Ok(largest_eigenvalue(k.entries())?.0)
}

fn sector_state(state: &StateVector, n: usize) -> anyhow::Result<StateVector> {
    state
        .project_particle_number(n)?
        .0
        .ok_or_else(|| anyhow::anyhow!("sector N={n} unexpectedly empty"))
}

fn string_sign(r: usize) -> anyhow::Result<f64> {
    let mut worst: f64 = 0.0;
    for p in 1..=r / 2 {
        let pi = PairIndex::new(p, r)?;
        let with = jw_pair_creation(pi, r, true)?.dense();
        let without = jw_pair_creation(pi, r, false)?.dense();
        worst = worst
            .max(max_diff(&with, &(-without.clone())))
            .max(max_diff(&with, &dense_pair_creation(pi, r, true)))
            .max(max_diff(&without, &dense_pair_creation(pi, r, false)));
    }
    Ok(worst)
}

fn hopper_expansion(r: usize, mutate: &mut bool) -> anyhow::Result<f64> {
    let mut worst: f64 = 0.0;
    for p in 1..=r / 2 {
        for q in (1..=r / 2).filter(|&q| q != p) {
            let (pi, qi) = (PairIndex::new(p, r)?, PairIndex::new(q, r)?);
            for component in [Component::Real, Component::Imaginary] {
                let mut expansion = pauli_expansion_pair_hopper(pi, qi, component, r)?;
                if std::mem::take(mutate) {
                    expansion[0].0 = -expansion[0].0;
                }
                worst = worst.max(max_diff(&rebuild(r, &expansion), &dense_pair_hopper(pi, qi, component, r)));
            }
        }
    }
    Ok(worst)
}

fn diagonal_expansion(r: usize) -> anyhow::Result<f64> {
    let mut worst: f64 = 0.0;
    for p in 1..=r / 2 {
        let pi = PairIndex::new(p, r)?;
        let c = dense_pair_creation(pi, r, false);
        worst = worst.max(max_diff(&rebuild(r, &diagonal_pair_occupation(pi, r)?), &(&c * c.adjoint())));
    }
    Ok(worst)
}

/// Every state the oracle checks look at for one `r`: ensemble, then each
/// even sector with its particle number.
fn oracle_states(r: usize) -> anyhow::Result<Vec<(Sector, StateVector)>> {
    let state = prepare_agp(r)?;
    let mut out = vec![(Sector::Ensemble, state.clone())];
    for n in (0..=r).step_by(2) {
        out.push((Sector::Particles(n), sector_state(&state, n)?));
    }
    Ok(out)
}

struct OracleDeviations {
    geminal_block: f64,
    closed_form: f64,
    trace_law: f64,
    antisymmetry: f64,
    factor_two: f64,
}

fn oracle_deviations(r: usize) -> anyhow::Result<OracleDeviations> {
    let mut d = OracleDeviations { geminal_block: 0.0, closed_form: 0.0, trace_law: 0.0, antisymmetry: 0.0, factor_two: 0.0 };
    for (sector, state) in oracle_states(r)? {
        let rdm = brute_force_2rdm(&state)?;
        let k = geminal_block_of(&rdm)?;
        d.geminal_block = d.geminal_block.max(k.max_abs_diff(&assemble_exact(&state)?));
        let lambda = top(&k)?;
        d.closed_form = d.closed_form.max((lambda - closed_form_lambda(sector, r)?).abs());
        d.antisymmetry = d.antisymmetry.max(rdm.antisymmetry_defect()).max(rdm.hermiticity_defect());
        let paired = largest_eigenvalue(&rdm.paired_subspace())?.0;
        let embedded = largest_eigenvalue(&k.embed_orbital_block())?.0;
        d.factor_two = d.factor_two.max((paired - 2.0 * lambda).abs()).max((embedded - 2.0 * lambda).abs());
        if let Sector::Particles(n) = sector {
            let n = n as f64;
            d.trace_law = d.trace_law.max((rdm.trace() - n * (n - 1.0).max(0.0)).abs());
        }
    }
    Ok(d)
}

fn sector_decomposition(r: usize) -> anyhow::Result<f64> {
    let state = prepare_agp(r)?;
    let m = r / 2;
    let mut sum = DMatrix::<Complex64>::zeros(m, m);
    let mut weight = 0.0;
    for n in 0..=r {
        let (projected, w) = state.project_particle_number(n)?;
        weight += w;
        if let Some(s) = projected {
            sum += assemble_exact(&s)?.entries() * Complex64::new(w, 0.0);
        }
    }
    Ok(max_diff(assemble_exact(&state)?.entries(), &sum).max((weight - 1.0).abs()))
}

fn post_selection(r: usize) -> anyhow::Result<f64> {
    let state = prepare_agp(r)?;
    let settings = plan_settings(r)?;
    let histograms = settings
        .iter()
        .map(|s| exact_distribution(&state, s.rotation()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut worst: f64 = 0.0;
    let filters = std::iter::once(None).chain((0..=r).step_by(2).map(Some));
    for filter in filters {
        let mut estimates = Vec::new();
        for (setting, hist) in settings.iter().zip(&histograms) {
            estimates.extend(setting.estimate(hist, filter)?);
        }
        let got = assemble_from_shots(r / 2, &estimates)?;
        let want = match filter {
            None => assemble_exact(&state)?,
            Some(n) => assemble_exact(&sector_state(&state, n)?)?,
        };
        worst = worst.max(got.max_abs_diff(&want));
    }
    Ok(worst)
}

/// Runs every check whose register fits in `opts.r_max`.
pub fn run_verify(opts: VerifyOptions) -> anyhow::Result<Vec<Check>> {
    if opts.r_max > ORACLE_MAX_QUBITS {
        return Err(usage(format!("--r-max may be at most {ORACLE_MAX_QUBITS}, got {}", opts.r_max)));
    }
    let mut checks = Vec::new();
    let mut record = |name: String, deviation: f64| {
        checks.push(Check { name, deviation, passed: deviation <= TOLERANCE });
    };
    let dense_max = opts.r_max.min(DENSE_MAX_QUBITS);
    let mut mutate = opts.mutate_sign;
    for r in (2..=dense_max).step_by(2) {
        record(format!("jw strings reduce to a sign, r={r}"), string_sign(r)?);
        record(format!("diagonal expansion, r={r}"), diagonal_expansion(r)?);
        if r >= 4 {
            record(format!("hopper expansion fidelity, r={r}"), hopper_expansion(r, &mut mutate)?);
        }
        record(format!("post-selection equivalence, r={r}"), post_selection(r)?);
    }
    for r in (2..=opts.r_max).step_by(2) {
        let d = oracle_deviations(r)?;
        record(format!("geminal block = oracle block, r={r}"), d.geminal_block);
        record(format!("closed-form eigenvalues, r={r}"), d.closed_form);
        record(format!("trace law N(N-1), r={r}"), d.trace_law);
        record(format!("2-RDM antisymmetry, r={r}"), d.antisymmetry);
        record(format!("factor-2 embedding, r={r}"), d.factor_two);
        record(format!("sector decomposition, r={r}"), sector_decomposition(r)?);
    }
    Ok(checks)
}

pub fn render_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status}  {:<width$}  max deviation {:.3e}", c.name, c.deviation);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", checks.len(), failed);
    out
}
