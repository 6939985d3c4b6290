//! Symbolic fermionic ladder-operator products and their qubit images.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{AgpError, Result};
use crate::pauli::{PauliString, PauliSum, Pauli};

/// A creation or annihilation operator on a 1-based orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

impl Ladder {
    pub fn orbital(self) -> usize {
        match self {
            Ladder::Create(o) | Ladder::Annihilate(o) => o,
        }
    }

    pub fn is_creation(self) -> bool {
        matches!(self, Ladder::Create(_))
    }

    pub fn adjoint(self) -> Ladder {
        match self {
            Ladder::Create(o) => Ladder::Annihilate(o),
            Ladder::Annihilate(o) => Ladder::Create(o),
        }
    }

    /// Normal-order rank: creators first by descending orbital, then
    /// annihilators by descending orbital.
    fn rank(self) -> (u8, std::cmp::Reverse<usize>) {
        match self {
            Ladder::Create(o) => (0, std::cmp::Reverse(o)),
            Ladder::Annihilate(o) => (1, std::cmp::Reverse(o)),
        }
    }
}

/// How ladder operators are mapped onto qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitMapping {
    /// Full Jordan-Wigner: `a^dag_j = Z_1 ... Z_{j-1} sigma^+_j`.
    JordanWigner,
    /// Hard-core boson map without parity strings: `a^dag_j = sigma^+_j`.
    Local,
}

/// A linear combination of ladder-operator products.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FermionOp {
    terms: Vec<(Complex64, Vec<Ladder>)>,
}

impl FermionOp {
    pub fn product(coeff: Complex64, ops: Vec<Ladder>) -> Self {
        FermionOp { terms: vec![(coeff, ops)] }
    }

    pub fn terms(&self) -> &[(Complex64, Vec<Ladder>)] {
        &self.terms
    }

    pub fn add(mut self, other: &FermionOp) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self
    }

    pub fn mul(&self, other: &FermionOp) -> Self {
        let mut terms = Vec::new();
        for (a, ops_a) in &self.terms {
            for (b, ops_b) in &other.terms {
                let mut ops = ops_a.clone();
                ops.extend_from_slice(ops_b);
                terms.push((a * b, ops));
            }
        }
        FermionOp { terms }
    }

    pub fn adjoint(&self) -> Self {
        FermionOp {
            terms: self
                .terms
                .iter()
                .map(|(c, ops)| (c.conj(), ops.iter().rev().map(|l| l.adjoint()).collect()))
                .collect(),
        }
    }

    pub fn max_orbital(&self) -> usize {
        self.terms.iter().flat_map(|(_, ops)| ops.iter().map(|l| l.orbital())).max().unwrap_or(0)
    }

    /// Rewrites every product in normal order using the canonical
    /// anticommutation relations, merging equal products.
    pub fn normal_ordered(&self) -> Self {
        let mut merged: BTreeMap<Vec<Ladder>, Complex64> = BTreeMap::new();
        let mut stack: Vec<(Complex64, Vec<Ladder>)> = self.terms.clone();
        while let Some((coeff, mut ops)) = stack.pop() {
            let mut sign = 1.0;
            let mut vanished = false;
            // Bubble sort by rank; each adjacent swap costs a sign and an
            // annihilator passing its own creator spawns a contraction term.
            'outer: loop {
                for i in 0..ops.len().saturating_sub(1) {
                    let (l, r) = (ops[i], ops[i + 1]);
                    if l == r {
                        vanished = true;
                        break 'outer;
                    }
                    if l.rank() > r.rank() {
                        if let (Ladder::Annihilate(a), Ladder::Create(b)) = (l, r) {
                            if a == b {
                                let mut contracted = ops[..i].to_vec();
                                contracted.extend_from_slice(&ops[i + 2..]);
                                stack.push((coeff * sign, contracted));
                            }
                        }
                        ops.swap(i, i + 1);
                        sign = -sign;
                        continue 'outer;
                    }
                }
                break;
            }
            if !vanished {
                *merged.entry(ops).or_insert(Complex64::new(0.0, 0.0)) += coeff * sign;
            }
        }
        let mut terms: Vec<(Complex64, Vec<Ladder>)> = merged
            .into_iter()
            .filter(|(_, c)| c.norm() > 1e-14)
            .map(|(ops, c)| (c, ops))
            .collect();
        terms.sort_by(|a, b| {
            a.1.len().cmp(&b.1.len()).then_with(|| {
                a.1.iter().map(|l| l.rank()).cmp(b.1.iter().map(|l| l.rank()))
            })
        });
        FermionOp { terms }
    }

    /// Qubit image of the operator on `num_qubits` qubits.
    pub fn to_qubits(&self, num_qubits: usize, mapping: QubitMapping) -> Result<PauliSum> {
        if self.max_orbital() > num_qubits {
            return Err(AgpError::QubitIndex { index: self.max_orbital(), num_qubits });
        }
        let mut total = PauliSum::zero(num_qubits);
        for (coeff, ops) in &self.terms {
            let mut acc = PauliSum::identity(num_qubits)?.scale(*coeff);
            for &l in ops {
                acc = acc.mul(&ladder_image(l, num_qubits, mapping)?)?;
            }
            total = total.add(&acc)?;
        }
        Ok(total.simplify())
    }

    pub fn jordan_wigner(&self, num_qubits: usize) -> Result<PauliSum> {
        self.to_qubits(num_qubits, QubitMapping::JordanWigner)
    }
}

fn ladder_image(l: Ladder, num_qubits: usize, mapping: QubitMapping) -> Result<PauliSum> {
    let j = l.orbital();
    if j == 0 {
        return Err(AgpError::invalid("orbital indices are 1-based"));
    }
    let local = if l.is_creation() {
        PauliSum::raising(num_qubits, j)?
    } else {
        PauliSum::lowering(num_qubits, j)?
    };
    match mapping {
        QubitMapping::Local => Ok(local),
        QubitMapping::JordanWigner => {
            let letters: Vec<(usize, Pauli)> = (1..j).map(|k| (k, Pauli::Z)).collect();
            let string = PauliSum::from_terms(
                num_qubits,
                [(Complex64::new(1.0, 0.0), PauliString::from_letters(num_qubits, &letters)?)],
            )?;
            string.mul(&local)
        }
    }
}

impl fmt::Display for FermionOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, ops)| {
                let ops: Vec<String> = ops
                    .iter()
                    .map(|l| match l {
                        Ladder::Create(o) => format!("a+{o}"),
                        Ladder::Annihilate(o) => format!("a{o}"),
                    })
                    .collect();
                format!("({c}) {}", ops.join(" "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
