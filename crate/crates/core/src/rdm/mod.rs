//! The geminal block `K[p][q] = <P^dag_p P_q>` of the two-particle RDM.

mod eigen;
mod report;

pub use eigen::{hermiticity_defect, largest_eigenvalue, spectrum, HERMITIAN_TOL};
pub use report::{condensation_verdict, lambda_stderr, yang_coleman_bound, CondensationReport, Sector};

use std::collections::BTreeMap;
use std::fmt::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{AgpError, Result};
use crate::pairing::{
    diagonal_pair_occupation, expansion_expectation, pauli_expansion_pair_hopper, Component, EntryEstimate,
    EntryKind, PairIndex,
};
use crate::statevector::StateVector;

/// Pair-index geminal matrix, optionally with per-entry standard errors
/// (real part: error of `Re K`, imaginary part: error of `Im K`).
#[derive(Debug, Clone, PartialEq)]
pub struct GeminalMatrix {
    entries: DMatrix<Complex64>,
    stderr: Option<DMatrix<Complex64>>,
}

impl GeminalMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(AgpError::invalid("geminal matrix must be square"));
        }
        Ok(GeminalMatrix { entries, stderr: None })
    }

    pub fn zeros(num_pairs: usize) -> Self {
        GeminalMatrix { entries: DMatrix::zeros(num_pairs, num_pairs), stderr: None }
    }

    pub fn num_pairs(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn stderr(&self) -> Option<&DMatrix<Complex64>> {
        self.stderr.as_ref()
    }

    /// `K[p][q]` with 1-based pair indices.
    pub fn get(&self, p: usize, q: usize) -> Complex64 {
        self.entries[(p - 1, q - 1)]
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|c| c.re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.entries)
    }

    pub fn max_abs_diff(&self, other: &GeminalMatrix) -> f64 {
        (&self.entries - &other.entries).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `(r/2) x (r/2)` matrix to the redundant `r x r` orbital embedding
    /// `G[u][v] = K[ceil(u/2)][ceil(v/2)]`, whose spectrum is
    /// `{2 lambda_i(K)}` plus `r/2` zeros.
    pub fn embed_orbital_block(&self) -> DMatrix<Complex64> {
        let r = 2 * self.num_pairs();
        DMatrix::from_fn(r, r, |u, v| self.entries[(u / 2, v / 2)])
    }

    /// Row-major CSV with `re+imj` cells.
    pub fn to_csv(&self) -> String {
        matrix_csv(&self.entries)
    }

    pub fn stderr_csv(&self) -> Option<String> {
        self.stderr.as_ref().map(matrix_csv)
    }
}

fn matrix_csv(m: &DMatrix<Complex64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let cells: Vec<String> = (0..m.ncols()).map(|j| format_complex(m[(i, j)])).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

fn format_complex(c: Complex64) -> String {
    // Collapse negative zero so identical matrices print identically.
    let re = if c.re == 0.0 { 0.0 } else { c.re };
    let im = if c.im == 0.0 { 0.0 } else { c.im };
    if im < 0.0 {
        format!("{re}{im}j")
    } else {
        format!("{re}+{im}j")
    }
}

fn require_pairs(num_qubits: usize) -> Result<usize> {
    if num_qubits < 2 || num_qubits % 2 != 0 {
        return Err(AgpError::invalid(format!(
            "geminal block needs an even qubit count >= 2, got {num_qubits}"
        )));
    }
    Ok(num_qubits / 2)
}

/// Exact geminal block from Pauli-expansion expectations.
pub fn assemble_exact(state: &StateVector) -> Result<GeminalMatrix> {
    let r = state.num_qubits();
    let m = require_pairs(r)?;
    let mut k = DMatrix::zeros(m, m);
    for p in 1..=m {
        let pp = PairIndex::new(p, r)?;
        let diag = expansion_expectation(state, &diagonal_pair_occupation(pp, r)?)?;
        k[(p - 1, p - 1)] = Complex64::new(diag.re, 0.0);
        for q in p + 1..=m {
            let qq = PairIndex::new(q, r)?;
            let re = expansion_expectation(state, &pauli_expansion_pair_hopper(pp, qq, Component::Real, r)?)?;
            let im = expansion_expectation(state, &pauli_expansion_pair_hopper(pp, qq, Component::Imaginary, r)?)?;
            let entry = Complex64::new(re.re / 2.0, im.re / 2.0);
            k[(p - 1, q - 1)] = entry;
            k[(q - 1, p - 1)] = entry.conj();
        }
    }
    GeminalMatrix::new(k)
}

/// Builds `K` from estimated components of every diagonal entry and both
/// components of every `p < q` entry; the lower triangle is the conjugate.
pub fn assemble_from_shots(num_pairs: usize, estimates: &[EntryEstimate]) -> Result<GeminalMatrix> {
    let mut found: BTreeMap<(usize, usize, EntryKind), &EntryEstimate> = BTreeMap::new();
    for e in estimates {
        if e.row == 0 || e.col == 0 || e.row > num_pairs || e.col > num_pairs {
            return Err(AgpError::invalid(format!(
                "estimate for ({}, {}) outside a {num_pairs}-pair matrix",
                e.row, e.col
            )));
        }
        if e.retained <= 0.0 {
            return Err(AgpError::EmptySector(0));
        }
        found.insert((e.row, e.col, e.kind), e);
    }
    let mut k = DMatrix::zeros(num_pairs, num_pairs);
    let mut se = DMatrix::zeros(num_pairs, num_pairs);
    for p in 1..=num_pairs {
        let d = found.get(&(p, p, EntryKind::Diagonal)).ok_or(AgpError::Incomplete { row: p, col: p })?;
        k[(p - 1, p - 1)] = Complex64::new(d.value, 0.0);
        se[(p - 1, p - 1)] = Complex64::new(d.stderr, 0.0);
        for q in p + 1..=num_pairs {
            let re = found.get(&(p, q, EntryKind::Real)).ok_or(AgpError::Incomplete { row: p, col: q })?;
            let im = found.get(&(p, q, EntryKind::Imaginary)).ok_or(AgpError::Incomplete { row: p, col: q })?;
            k[(p - 1, q - 1)] = Complex64::new(re.value, im.value);
            k[(q - 1, p - 1)] = Complex64::new(re.value, -im.value);
            se[(p - 1, q - 1)] = Complex64::new(re.stderr, im.stderr);
            se[(q - 1, p - 1)] = se[(p - 1, q - 1)];
        }
    }
    Ok(GeminalMatrix { entries: k, stderr: Some(se) })
}
