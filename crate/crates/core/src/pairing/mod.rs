//! Pair operators on adjacent orbitals and their qubit representations.
//!
//! Pair `p` owns orbitals `(2p-1, 2p)`. The pair creator used throughout is
//! `P^dag_p = sigma^+_{2p} sigma^+_{2p-1}`; its Jordan-Wigner counterpart
//! `a^dag_{2p} a^dag_{2p-1}` differs from it only by an overall sign,
//! because the parity strings of two adjacent orbitals cancel except on
//! orbital `2p-1` itself.

mod qasm;
mod settings;

pub use qasm::export_circuit_text;
pub use settings::{
    plan_settings, DecodeTable, EntryEstimate, EntryKind, LocalOutcome, MeasurementSetting,
    SettingKind,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{AgpError, Result};
use crate::fermion::{FermionOp, Ladder, QubitMapping};
use crate::pauli::{PauliString, PauliSum};

/// Tolerance for discarding imaginary parts of real expansions.
const REAL_TOL: f64 = 1e-14;

/// A 1-based pair index within an `r`-qubit register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairIndex(usize);

impl PairIndex {
    pub fn new(pair: usize, num_qubits: usize) -> Result<Self> {
        if pair == 0 || 2 * pair > num_qubits {
            return Err(AgpError::invalid(format!(
                "pair {pair} out of range for {num_qubits} qubits"
            )));
        }
        Ok(PairIndex(pair))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// `(2p-1, 2p)`.
    pub fn orbitals(self) -> (usize, usize) {
        (2 * self.0 - 1, 2 * self.0)
    }

    /// Bit mask of both orbitals in a basis index.
    pub fn mask(self) -> usize {
        0b11 << (2 * (self.0 - 1))
    }
}

/// Real or imaginary part of an off-diagonal geminal entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    Real,
    Imaginary,
}

/// Qubit image of the pair creator on pair `p`.
///
/// With `with_strings` the full Jordan-Wigner image of
/// `a^dag_{2p} a^dag_{2p-1}` is returned; without, `sigma^+_{2p} sigma^+_{2p-1}`.
/// The two agree up to a factor of -1.
pub fn jw_pair_creation(p: PairIndex, num_qubits: usize, with_strings: bool) -> Result<PauliSum> {
    let (lo, hi) = p.orbitals();
    let op = FermionOp::product(Complex64::new(1.0, 0.0), vec![Ladder::Create(hi), Ladder::Create(lo)]);
    let mapping = if with_strings { QubitMapping::JordanWigner } else { QubitMapping::Local };
    op.to_qubits(num_qubits, mapping)
}

/// `P^dag_p = sigma^+_{2p} sigma^+_{2p-1}`.
pub fn pair_creator(p: PairIndex, num_qubits: usize) -> Result<PauliSum> {
    jw_pair_creation(p, num_qubits, false)
}

/// `P_p = (P^dag_p)^dag`.
pub fn pair_annihilator(p: PairIndex, num_qubits: usize) -> Result<PauliSum> {
    Ok(pair_creator(p, num_qubits)?.adjoint())
}

/// Hermitian pair-transfer operator for one component of entry `(p, q)`:
/// `P^dag_p P_q + P^dag_q P_p` (real) or `i (P^dag_q P_p - P^dag_p P_q)`
/// (imaginary). Its expectation is `2 Re K_pq` or `2 Im K_pq`.
pub fn pair_hopper(p: PairIndex, q: PairIndex, component: Component, num_qubits: usize) -> Result<PauliSum> {
    if p == q {
        return Err(AgpError::invalid(format!(
            "pair hopper needs distinct pairs, got ({}, {})",
            p.get(),
            q.get()
        )));
    }
    let forward = pair_creator(p, num_qubits)?.mul(&pair_annihilator(q, num_qubits)?)?;
    let backward = pair_creator(q, num_qubits)?.mul(&pair_annihilator(p, num_qubits)?)?;
    match component {
        Component::Real => forward.add(&backward),
        Component::Imaginary => backward
            .add(&forward.scale(Complex64::new(-1.0, 0.0)))
            .map(|s| s.scale(Complex64::i())),
    }
}

/// Pauli expansion of [`pair_hopper`]: eight strings on the four involved
/// qubits with coefficients +-1/8 (even Y count for the real part, odd for
/// the imaginary part).
pub fn pauli_expansion_pair_hopper(
    p: PairIndex,
    q: PairIndex,
    component: Component,
    num_qubits: usize,
) -> Result<Vec<(f64, PauliString)>> {
    pair_hopper(p, q, component, num_qubits)?.real_terms(REAL_TOL)
}

/// `n_{2p-1} n_{2p} = (1 - Z_{2p-1})(1 - Z_{2p})/4`, the diagonal entry `K_pp`.
pub fn diagonal_pair_occupation(p: PairIndex, num_qubits: usize) -> Result<Vec<(f64, PauliString)>> {
    let (lo, hi) = p.orbitals();
    PauliSum::number(num_qubits, lo)?
        .mul(&PauliSum::number(num_qubits, hi)?)?
        .real_terms(REAL_TOL)
}

/// Sum of `coeff * <P>` over a real expansion.
pub fn expansion_expectation(
    state: &crate::statevector::StateVector,
    expansion: &[(f64, PauliString)],
) -> Result<Complex64> {
    expansion
        .iter()
        .map(|(c, p)| state.expectation(p).map(|e| e * *c))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;
    use crate::statevector::{prepare_agp, StateVector};

    fn pair(p: usize, r: usize) -> PairIndex {
        PairIndex::new(p, r).unwrap()
    }

    #[test]
    fn pair_index_bounds() {
        assert!(PairIndex::new(0, 4).is_err());
        assert!(PairIndex::new(3, 4).is_err());
        assert_eq!(pair(2, 4).orbitals(), (3, 4));
        assert_eq!(pair(2, 4).mask(), 0b1100);
    }

    #[test]
    fn first_pair_strings_coincide_up_to_sign() {
        let with = jw_pair_creation(pair(1, 2), 2, true).unwrap();
        let without = jw_pair_creation(pair(1, 2), 2, false).unwrap();
        assert_eq!(with.len(), 4);
        assert_eq!(without.len(), 4);
        for ((cw, pw), (cn, pn)) in with.terms().iter().zip(without.terms()) {
            assert_eq!(pw, pn);
            assert!((cw + cn).norm() < 1e-15);
            assert_eq!(pw.support() & !0b11, 0);
        }
    }

    #[test]
    fn both_mappings_fill_the_pair_from_vacuum() {
        let r = 6;
        for p in 1..=3 {
            for with_strings in [false, true] {
                let op = jw_pair_creation(pair(p, r), r, with_strings).unwrap();
                let vacuum = StateVector::new_zero_state(r).unwrap();
                let mut out = vec![Complex64::new(0.0, 0.0); 1 << r];
                for (c, pauli) in op.terms() {
                    let (y, phase) = pauli.apply_to_basis(0);
                    out[y] += c * phase * vacuum.amplitude(0);
                }
                let target = pair(p, r).mask();
                let sign = if with_strings { -1.0 } else { 1.0 };
                for (i, a) in out.iter().enumerate() {
                    let e = if i == target { sign } else { 0.0 };
                    assert!((a - Complex64::new(e, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn hopper_expansion_shape() {
        let r = 4;
        let re = pauli_expansion_pair_hopper(pair(1, r), pair(2, r), Component::Real, r).unwrap();
        let im = pauli_expansion_pair_hopper(pair(1, r), pair(2, r), Component::Imaginary, r).unwrap();
        for (terms, parity) in [(&re, 0), (&im, 1)] {
            assert_eq!(terms.len(), 8);
            let total: f64 = terms.iter().map(|(c, _)| c.abs()).sum();
            assert!((total - 1.0).abs() < 1e-15);
            for (c, p) in terms.iter() {
                assert!((c.abs() - 0.125).abs() < 1e-15);
                assert_eq!(p.weight(), 4);
                assert_eq!(p.count_y() % 2, parity);
                assert!(p.letters().iter().all(|(_, l)| *l != Pauli::Z));
            }
        }
        let xxxx = PauliString::from_label("XXXX").unwrap();
        let coeff = re.iter().find(|(_, p)| *p == xxxx).unwrap().0;
        assert!((coeff - 0.125).abs() < 1e-15);
        assert!(pauli_expansion_pair_hopper(pair(1, r), pair(1, r), Component::Real, r).is_err());
    }

    #[test]
    fn hopper_expectation_on_agp() {
        let r = 4;
        let s = prepare_agp(r).unwrap();
        let re = pauli_expansion_pair_hopper(pair(1, r), pair(2, r), Component::Real, r).unwrap();
        let im = pauli_expansion_pair_hopper(pair(1, r), pair(2, r), Component::Imaginary, r).unwrap();
        assert!((expansion_expectation(&s, &re).unwrap() - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        assert!(expansion_expectation(&s, &im).unwrap().norm() < 1e-12);
    }

    #[test]
    fn diagonal_occupation() {
        let r = 6;
        let d = diagonal_pair_occupation(pair(2, r), r).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.iter().all(|(c, _)| (c.abs() - 0.25).abs() < 1e-15));
        let e = |s: &StateVector| expansion_expectation(s, &d).unwrap().re;
        assert!(e(&StateVector::new_zero_state(r).unwrap()).abs() < 1e-15);
        assert!((e(&prepare_agp(r).unwrap()) - 0.5).abs() < 1e-12);
        assert!((e(&StateVector::all_ones(r).unwrap()) - 1.0).abs() < 1e-15);
    }
}
