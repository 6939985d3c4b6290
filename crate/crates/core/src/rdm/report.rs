use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{largest_eigenvalue, GeminalMatrix};
use crate::error::{AgpError, Result};

/// The full non-number-conserving state, or one particle-number sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Ensemble,
    Particles(usize),
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sector::Ensemble => write!(f, "ensemble"),
            Sector::Particles(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Sector {
    type Err = AgpError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ensemble" => Ok(Sector::Ensemble),
            other => other
                .parse::<usize>()
                .map(Sector::Particles)
                .map_err(|_| AgpError::invalid(format!("unknown sector {other:?}"))),
        }
    }
}

impl Serialize for Sector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Sector::Ensemble => serializer.serialize_str("ensemble"),
            Sector::Particles(n) => serializer.serialize_u64(*n as u64),
        }
    }
}

/// Outcome of one `(r, sector)` evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensationReport {
    pub r: usize,
    pub sector: Sector,
    /// Largest eigenvalue of the pair-index matrix `K`.
    pub lambda_d: f64,
    pub eigvec: Vec<Complex64>,
    /// Finite-rank bound on the orbital-block eigenvalue `2 lambda_d`;
    /// only defined for even sectors with `2 <= N <= r`.
    pub bound: Option<f64>,
    pub condensed: bool,
    pub lambda_stderr: Option<f64>,
}

impl Serialize for CondensationReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CondensationReport", 6)?;
        s.serialize_field("r", &self.r)?;
        s.serialize_field("sector", &self.sector)?;
        s.serialize_field("lambda_D", &self.lambda_d)?;
        s.serialize_field("bound", &self.bound)?;
        s.serialize_field("condensed", &self.condensed)?;
        s.serialize_field("stderr", &self.lambda_stderr)?;
        s.end()
    }
}

/// `N (1 - (N - 2)/r)`, the finite-rank ceiling on the largest eigenvalue
/// of the antisymmetrized orbital pairing block (equal to `2 lambda_d`).
pub fn yang_coleman_bound(particles: usize, orbitals: usize) -> Result<f64> {
    if particles < 2 || particles % 2 != 0 || particles > orbitals {
        return Err(AgpError::invalid(format!(
            "bound needs even N with 2 <= N <= r, got N={particles}, r={orbitals}"
        )));
    }
    let (n, r) = (particles as f64, orbitals as f64);
    Ok(n * (1.0 - (n - 2.0) / r))
}

/// First-order propagation of per-entry errors into `lambda = v^dag K v`.
///
/// Diagonal errors and the real/imaginary errors of each `p < q` entry are
/// treated as independent.
pub fn lambda_stderr(k: &GeminalMatrix, v: &DVector<Complex64>) -> Option<f64> {
    let se = k.stderr()?;
    let m = k.num_pairs();
    let mut var = 0.0;
    for p in 0..m {
        var += v[p].norm_sqr().powi(2) * se[(p, p)].re.powi(2);
        for q in p + 1..m {
            let c = v[p].conj() * v[q];
            var += 4.0 * (c.re.powi(2) * se[(p, q)].re.powi(2) + c.im.powi(2) * se[(p, q)].im.powi(2));
        }
    }
    Some(var.sqrt())
}

/// Margin above 1 that a point estimate must clear, so that values equal to
/// 1 up to rounding (pair sector, r = 6 ensemble) do not count as condensed.
pub const CONDENSATION_TOL: f64 = 1e-9;

/// Diagonalizes `k` and records the condensation verdict `lambda_d > 1`.
pub fn condensation_verdict(r: usize, sector: Sector, k: &GeminalMatrix) -> Result<CondensationReport> {
    if k.num_pairs() * 2 != r {
        return Err(AgpError::invalid(format!(
            "a {0}x{0} geminal matrix does not belong to r={r}",
            k.num_pairs()
        )));
    }
    let (lambda_d, v) = largest_eigenvalue(k.entries())?;
    let bound = match sector {
        Sector::Particles(n) => yang_coleman_bound(n, r).ok(),
        Sector::Ensemble => None,
    };
    Ok(CondensationReport {
        r,
        sector,
        lambda_d,
        lambda_stderr: lambda_stderr(k, &v),
        eigvec: v.iter().copied().collect(),
        bound,
        condensed: lambda_d > 1.0 + CONDENSATION_TOL,
    })
}
