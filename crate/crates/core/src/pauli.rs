//! Pauli strings in symplectic (x, z) bit-mask form and weighted sums of them.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{AgpError, Result};

/// Widest register a [`PauliString`] can address.
pub const MAX_PAULI_QUBITS: usize = 64;

const SIMPLIFY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// `i^phase` times a tensor product of single-qubit Pauli letters.
///
/// A letter at qubit `k` (1-based) is encoded in bit `k - 1` of the masks:
/// X sets `x`, Z sets `z`, Y sets both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    num_qubits: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_PAULI_QUBITS {
            return Err(AgpError::Capacity { requested: num_qubits, max: MAX_PAULI_QUBITS });
        }
        Ok(PauliString { num_qubits, x: 0, z: 0, phase: 0 })
    }

    /// Builds a string from `(qubit, letter)` pairs; each qubit at most once.
    pub fn from_letters(num_qubits: usize, letters: &[(usize, Pauli)]) -> Result<Self> {
        let mut p = Self::identity(num_qubits)?;
        for &(q, letter) in letters {
            if q == 0 || q > num_qubits {
                return Err(AgpError::QubitIndex { index: q, num_qubits });
            }
            let bit = 1u64 << (q - 1);
            if (p.x | p.z) & bit != 0 {
                return Err(AgpError::invalid(format!("qubit {q} given two Pauli letters")));
            }
            let (xb, zb) = letter.bits();
            if xb {
                p.x |= bit;
            }
            if zb {
                p.z |= bit;
            }
        }
        Ok(p)
    }

    /// Parses a dense label such as `"XIZY"`, leftmost character on qubit 1.
    pub fn from_label(label: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for (i, ch) in label.chars().enumerate() {
            let letter = match ch {
                'I' => continue,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(AgpError::invalid(format!("bad Pauli letter {other:?}"))),
            };
            letters.push((i + 1, letter));
        }
        Self::from_letters(label.chars().count(), &letters)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Power of `i` multiplying the letters.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn phase_factor(&self) -> Complex64 {
        i_pow(self.phase)
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    pub fn negated(self) -> Self {
        let phase = self.phase + 2;
        self.with_phase(phase)
    }

    pub fn letter(&self, qubit: usize) -> Option<Pauli> {
        if qubit == 0 || qubit > self.num_qubits {
            return None;
        }
        let bit = 1u64 << (qubit - 1);
        match (self.x & bit != 0, self.z & bit != 0) {
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
            (false, false) => None,
        }
    }

    pub fn letters(&self) -> Vec<(usize, Pauli)> {
        (1..=self.num_qubits).filter_map(|q| self.letter(q).map(|l| (q, l))).collect()
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn count_y(&self) -> usize {
        (self.x & self.z).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    /// True for phase +-1, where the string is Hermitian.
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// Letters with the phase reset to +1, used as a grouping key.
    pub fn unsigned(&self) -> Self {
        self.with_phase(0)
    }

    /// Image of basis state `basis`: `P|b> = phase * |b ^ x>`.
    pub fn apply_to_basis(&self, basis: usize) -> (usize, Complex64) {
        let b = basis as u64;
        let mut power = self.phase as u32 + self.count_y() as u32;
        if (b & self.z).count_ones() % 2 == 1 {
            power += 2;
        }
        ((b ^ self.x) as usize, i_pow(power as u8))
    }

    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.num_qubits != other.num_qubits {
            return Err(AgpError::invalid(format!(
                "cannot multiply Pauli strings on {} and {} qubits",
                self.num_qubits, other.num_qubits
            )));
        }
        let mut phase = self.phase as u32 + other.phase as u32;
        for q in 0..self.num_qubits {
            let bit = 1u64 << q;
            let a = (self.x & bit != 0, self.z & bit != 0);
            let b = (other.x & bit != 0, other.z & bit != 0);
            phase += letter_product_phase(a, b);
        }
        Ok(PauliString {
            num_qubits: self.num_qubits,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (phase % 4) as u8,
        })
    }

    pub fn adjoint(&self) -> PauliString {
        self.with_phase((4 - self.phase) % 4)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    pub fn dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.num_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let (row, phase) = self.apply_to_basis(col);
            m[(row, col)] = phase;
        }
        m
    }

    /// Dense label, leftmost character on qubit 1 (phase not included).
    pub fn label(&self) -> String {
        (1..=self.num_qubits).map(|q| self.letter(q).map_or('I', Pauli::symbol)).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{sign}")?;
        if self.is_identity() {
            return write!(f, "I");
        }
        let parts: Vec<String> =
            self.letters().iter().map(|(q, l)| format!("{}{q}", l.symbol())).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn i_pow(power: u8) -> Complex64 {
    match power % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Power of `i` picked up by a single-qubit letter product `a * b`.
fn letter_product_phase(a: (bool, bool), b: (bool, bool)) -> u32 {
    const X: (bool, bool) = (true, false);
    const Y: (bool, bool) = (true, true);
    const Z: (bool, bool) = (false, true);
    match (a, b) {
        (X, Y) | (Y, Z) | (Z, X) => 1,
        (Y, X) | (Z, Y) | (X, Z) => 3,
        _ => 0,
    }
}

/// A complex-weighted sum of Pauli strings. Stored strings carry phase +1;
/// any phase is folded into the coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    num_qubits: usize,
    terms: Vec<(Complex64, PauliString)>,
}

impl PauliSum {
    pub fn zero(num_qubits: usize) -> Self {
        PauliSum { num_qubits, terms: Vec::new() }
    }

    pub fn from_terms(
        num_qubits: usize,
        terms: impl IntoIterator<Item = (Complex64, PauliString)>,
    ) -> Result<Self> {
        let mut sum = PauliSum::zero(num_qubits);
        for (c, p) in terms {
            sum.push(c, p)?;
        }
        Ok(sum)
    }

    pub fn identity(num_qubits: usize) -> Result<Self> {
        Self::from_terms(num_qubits, [(Complex64::new(1.0, 0.0), PauliString::identity(num_qubits)?)])
    }

    fn single(num_qubits: usize, qubit: usize, terms: &[(Complex64, Option<Pauli>)]) -> Result<Self> {
        let mut sum = PauliSum::zero(num_qubits);
        for &(c, letter) in terms {
            let p = match letter {
                Some(l) => PauliString::from_letters(num_qubits, &[(qubit, l)])?,
                None => PauliString::identity(num_qubits)?,
            };
            sum.push(c, p)?;
        }
        Ok(sum)
    }

    /// `sigma^+ = |1><0| = (X - iY)/2`.
    pub fn raising(num_qubits: usize, qubit: usize) -> Result<Self> {
        Self::single(
            num_qubits,
            qubit,
            &[(Complex64::new(0.5, 0.0), Some(Pauli::X)), (Complex64::new(0.0, -0.5), Some(Pauli::Y))],
        )
    }

    /// `sigma^- = |0><1| = (X + iY)/2`.
    pub fn lowering(num_qubits: usize, qubit: usize) -> Result<Self> {
        Self::single(
            num_qubits,
            qubit,
            &[(Complex64::new(0.5, 0.0), Some(Pauli::X)), (Complex64::new(0.0, 0.5), Some(Pauli::Y))],
        )
    }

    /// Occupation `n = |1><1| = (I - Z)/2`.
    pub fn number(num_qubits: usize, qubit: usize) -> Result<Self> {
        Self::single(
            num_qubits,
            qubit,
            &[(Complex64::new(0.5, 0.0), None), (Complex64::new(-0.5, 0.0), Some(Pauli::Z))],
        )
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, coeff: Complex64, pauli: PauliString) -> Result<()> {
        if pauli.num_qubits() != self.num_qubits {
            return Err(AgpError::invalid(format!(
                "term on {} qubits added to a {}-qubit sum",
                pauli.num_qubits(),
                self.num_qubits
            )));
        }
        self.terms.push((coeff * pauli.phase_factor(), pauli.unsigned()));
        Ok(())
    }

    pub fn scale(mut self, factor: Complex64) -> Self {
        self.terms.iter_mut().for_each(|(c, _)| *c *= factor);
        self
    }

    pub fn add(mut self, other: &PauliSum) -> Result<Self> {
        for &(c, p) in &other.terms {
            self.push(c, p)?;
        }
        Ok(self.simplify())
    }

    pub fn mul(&self, other: &PauliSum) -> Result<Self> {
        let mut out = PauliSum::zero(self.num_qubits);
        for &(a, p) in &self.terms {
            for &(b, q) in &other.terms {
                out.push(a * b, p.mul(&q)?)?;
            }
        }
        Ok(out.simplify())
    }

    pub fn adjoint(&self) -> Self {
        PauliSum {
            num_qubits: self.num_qubits,
            terms: self.terms.iter().map(|&(c, p)| (c.conj(), p)).collect(),
        }
    }

    /// Merges equal strings, drops vanishing terms and sorts by label.
    pub fn simplify(self) -> Self {
        let mut merged: std::collections::BTreeMap<(u64, u64), Complex64> = Default::default();
        for (c, p) in self.terms {
            *merged.entry((p.x, p.z)).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let num_qubits = self.num_qubits;
        let mut terms: Vec<(Complex64, PauliString)> = merged
            .into_iter()
            .filter(|(_, c)| c.norm() > SIMPLIFY_TOL)
            .map(|((x, z), c)| (c, PauliString { num_qubits, x, z, phase: 0 }))
            .collect();
        terms.sort_by_key(|(_, p)| p.label());
        PauliSum { num_qubits, terms }
    }

    /// Real coefficients, failing if any imaginary part exceeds `tol`.
    pub fn real_terms(&self, tol: f64) -> Result<Vec<(f64, PauliString)>> {
        self.terms
            .iter()
            .map(|&(c, p)| {
                if c.im.abs() > tol {
                    Err(AgpError::invalid(format!("coefficient {c} of {p} is not real")))
                } else {
                    Ok((c.re, p))
                }
            })
            .collect()
    }

    pub fn dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.num_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for &(c, p) in &self.terms {
            for col in 0..dim {
                let (row, phase) = p.apply_to_basis(col);
                m[(row, col)] += c * phase;
            }
        }
        m
    }
}
