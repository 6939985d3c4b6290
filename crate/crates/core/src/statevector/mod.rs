//! Dense statevector simulation.

mod gate;
mod noise;
mod sampling;

pub use gate::{Circuit, Gate};
pub use noise::NoiseModel;
pub use sampling::{exact_distribution, sample_circuit, sample_shots, Histogram};

use num_complex::Complex64;

use crate::error::{AgpError, Result};
use crate::pauli::{PauliString, PauliSum};

/// Default register cap.
pub const DEFAULT_MAX_QUBITS: usize = 24;
/// Ceiling for the `AGP_MAX_QUBITS` override.
pub const HARD_MAX_QUBITS: usize = 30;

const NORM_TOL: f64 = 1e-12;
/// Sectors lighter than this are reported as empty.
const EMPTY_WEIGHT: f64 = 1e-20;

/// Capacity cap, honouring the `AGP_MAX_QUBITS` environment variable.
pub fn max_qubits() -> usize {
    std::env::var("AGP_MAX_QUBITS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.min(HARD_MAX_QUBITS))
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The vacuum `|0...0>`.
    pub fn new_zero_state(num_qubits: usize) -> Result<Self> {
        Self::basis_state(num_qubits, 0)
    }

    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        let max = max_qubits();
        if num_qubits > max {
            return Err(AgpError::Capacity { requested: num_qubits, max });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(AgpError::invalid(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amplitudes })
    }

    /// Every orbital occupied.
    pub fn all_ones(num_qubits: usize) -> Result<Self> {
        Self::basis_state(num_qubits, (1usize << num_qubits) - 1)
    }

    /// Wraps raw amplitudes; they must be normalized.
    pub fn from_amplitudes(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let max = max_qubits();
        if num_qubits > max {
            return Err(AgpError::Capacity { requested: num_qubits, max });
        }
        if amplitudes.len() != 1usize << num_qubits {
            return Err(AgpError::invalid(format!(
                "expected {} amplitudes, got {}",
                1usize << num_qubits,
                amplitudes.len()
            )));
        }
        let state = StateVector { num_qubits, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(AgpError::invalid(format!("state is not normalized (|psi|^2 = {norm})")));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(AgpError::invalid(format!(
                "circuit acts on {} qubits, state has {}",
                circuit.num_qubits(),
                self.num_qubits
            )));
        }
        for gate in circuit.gates() {
            self.apply_unchecked(gate);
        }
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, gate: &Gate) {
        match *gate {
            Gate::X(q) => self.apply_x(q - 1),
            Gate::Z(q) => self.apply_phase(q - 1, Complex64::new(-1.0, 0.0)),
            Gate::S(q) => self.apply_phase(q - 1, Complex64::i()),
            Gate::Cnot { control, target } => {
                self.apply_controlled_x(1 << (control - 1), target - 1)
            }
            Gate::Toffoli { controls, target } => self.apply_controlled_x(
                (1 << (controls[0] - 1)) | (1 << (controls[1] - 1)),
                target - 1,
            ),
            Gate::Unitary2 { qubits, ref matrix } => {
                self.apply_two_qubit(qubits[0] - 1, qubits[1] - 1, matrix)
            }
            ref g => {
                let m = g.single_qubit_matrix().expect("single-qubit gate");
                self.apply_single_qubit(g.qubits()[0] - 1, &m)
            }
        }
    }

    fn apply_single_qubit(&mut self, bit: usize, m: &[[Complex64; 2]; 2]) {
        let mask = 1usize << bit;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[j]);
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_x(&mut self, bit: usize) {
        let mask = 1usize << bit;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                self.amplitudes.swap(i, i | mask);
            }
        }
    }

    fn apply_phase(&mut self, bit: usize, phase: Complex64) {
        let mask = 1usize << bit;
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if i & mask != 0 {
                *a *= phase;
            }
        }
    }

    fn apply_controlled_x(&mut self, control_mask: usize, bit: usize) {
        let mask = 1usize << bit;
        for i in 0..self.amplitudes.len() {
            if i & control_mask == control_mask && i & mask == 0 {
                self.amplitudes.swap(i, i | mask);
            }
        }
    }

    fn apply_two_qubit(&mut self, bit0: usize, bit1: usize, m: &[[Complex64; 4]; 4]) {
        let (m0, m1) = (1usize << bit0, 1usize << bit1);
        for i in 0..self.amplitudes.len() {
            if i & (m0 | m1) != 0 {
                continue;
            }
            let idx = [i, i | m0, i | m1, i | m0 | m1];
            let old = idx.map(|k| self.amplitudes[k]);
            for (row, &k) in idx.iter().enumerate() {
                self.amplitudes[k] = (0..4).map(|col| m[row][col] * old[col]).sum();
            }
        }
    }

    /// Applies a Pauli string (including its phase).
    pub fn apply_pauli(&mut self, pauli: &PauliString) -> Result<()> {
        self.check_operator_width(pauli.num_qubits())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (x, &a) in self.amplitudes.iter().enumerate() {
            let (y, phase) = pauli.apply_to_basis(x);
            out[y] += phase * a;
        }
        self.amplitudes = out;
        Ok(())
    }

    /// `<psi| P |psi>`.
    pub fn expectation(&self, pauli: &PauliString) -> Result<Complex64> {
        self.check_operator_width(pauli.num_qubits())?;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
            .map(|(x, &a)| {
                let (y, phase) = pauli.apply_to_basis(x);
                self.amplitudes[y].conj() * phase * a
            })
            .sum())
    }

    pub fn expectation_sum(&self, op: &PauliSum) -> Result<Complex64> {
        op.terms()
            .iter()
            .map(|(c, p)| self.expectation(p).map(|e| c * e))
            .sum()
    }

    fn check_operator_width(&self, width: usize) -> Result<()> {
        if width > self.num_qubits {
            return Err(AgpError::QubitIndex { index: width, num_qubits: self.num_qubits });
        }
        Ok(())
    }

    /// Keeps only basis states with exactly `particles` occupied orbitals.
    ///
    /// Returns the renormalized projection (or `None` for an empty sector)
    /// and the sector weight before renormalization.
    pub fn project_particle_number(&self, particles: usize) -> Result<(Option<StateVector>, f64)> {
        if particles > self.num_qubits {
            return Err(AgpError::invalid(format!(
                "particle number {particles} exceeds {} orbitals",
                self.num_qubits
            )));
        }
        let mut amplitudes = self.amplitudes.clone();
        let mut weight = 0.0;
        for (i, a) in amplitudes.iter_mut().enumerate() {
            if i.count_ones() as usize == particles {
                weight += a.norm_sqr();
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        if weight <= EMPTY_WEIGHT {
            return Ok((None, weight));
        }
        let scale = 1.0 / weight.sqrt();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok((Some(StateVector { num_qubits: self.num_qubits, amplitudes }), weight))
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < NORM_TOL
    }
}

/// One H and one CNOT per adjacent pair `(2j-1, 2j)`.
pub fn agp_circuit(num_qubits: usize) -> Result<Circuit> {
    if num_qubits % 2 != 0 {
        return Err(AgpError::invalid(format!(
            "AGP preparation needs an even qubit count, got {num_qubits}"
        )));
    }
    let mut circuit = Circuit::new(num_qubits);
    for j in 1..=num_qubits / 2 {
        circuit.push(Gate::H(2 * j - 1))?;
        circuit.push(Gate::Cnot { control: 2 * j - 1, target: 2 * j })?;
    }
    Ok(circuit)
}

/// Product of `r/2` Bell pairs `(|00> + |11>)/sqrt(2)` on adjacent qubits,
/// prepared by running [`agp_circuit`] on the vacuum.
pub fn prepare_agp(num_qubits: usize) -> Result<StateVector> {
    let circuit = agp_circuit(num_qubits)?;
    let mut state = StateVector::new_zero_state(num_qubits)?;
    state.apply_circuit(&circuit)?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_state_shapes() {
        let s0 = StateVector::new_zero_state(0).unwrap();
        assert_eq!(s0.amplitudes(), &[c(1.0)]);
        let s2 = StateVector::new_zero_state(2).unwrap();
        assert_eq!(s2.amplitudes(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let s14 = StateVector::new_zero_state(14).unwrap();
        assert_eq!(s14.amplitudes().len(), 16384);
        assert_eq!(s14.amplitude(0), c(1.0));
        assert!(matches!(
            StateVector::new_zero_state(25),
            Err(AgpError::Capacity { requested: 25, .. })
        ));
    }

    #[test]
    fn x_on_first_qubit_sets_lowest_bit() {
        let mut s = StateVector::new_zero_state(2).unwrap();
        s.apply_gate(&Gate::X(1)).unwrap();
        assert_eq!(s.amplitude(1), c(1.0));
        assert!(s.apply_gate(&Gate::X(3)).is_err());
    }

    #[test]
    fn hadamard_is_an_involution() {
        let mut s = prepare_agp(4).unwrap();
        s.apply_gate(&Gate::Ry { qubit: 2, angle: 0.3 }).unwrap();
        let before = s.clone();
        s.apply_gate(&Gate::H(2)).unwrap();
        s.apply_gate(&Gate::H(2)).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn cnot_builds_bell_pair() {
        let mut s = StateVector::new_zero_state(2).unwrap();
        s.apply_gate(&Gate::H(1)).unwrap();
        assert!((s.amplitude(0) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.amplitude(1) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        s.apply_gate(&Gate::Cnot { control: 1, target: 2 }).unwrap();
        let expected = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a - c(e)).norm() < 1e-15);
        }
    }

    #[test]
    fn agp_amplitudes() {
        let s2 = prepare_agp(2).unwrap();
        let expected = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
        for (a, e) in s2.amplitudes().iter().zip(expected) {
            assert!((a - c(e)).norm() < 1e-15);
        }

        let s4 = prepare_agp(4).unwrap();
        for (i, a) in s4.amplitudes().iter().enumerate() {
            let e = if [0, 3, 12, 15].contains(&i) { 0.5 } else { 0.0 };
            assert!((a - c(e)).norm() < 1e-15, "index {i}");
        }

        let s6 = prepare_agp(6).unwrap();
        let nonzero: Vec<_> = s6.amplitudes().iter().filter(|a| a.norm() > 1e-15).collect();
        assert_eq!(nonzero.len(), 8);
        for a in nonzero {
            assert!((a - c(1.0 / 8f64.sqrt())).norm() < 1e-15);
        }

        assert!(matches!(prepare_agp(5), Err(AgpError::Validation(_))));
        assert_eq!(prepare_agp(0).unwrap().amplitudes(), &[c(1.0)]);
    }

    #[test]
    fn agp_zeroes_broken_pairs() {
        let s = prepare_agp(8).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            let paired = (0..4).all(|j| ((i >> (2 * j)) & 1) == ((i >> (2 * j + 1)) & 1));
            if !paired {
                assert_eq!(*a, c(0.0));
            }
        }
    }

    #[test]
    fn pauli_expectations() {
        let vac = StateVector::new_zero_state(2).unwrap();
        let z1 = PauliString::from_letters(2, &[(1, Pauli::Z)]).unwrap();
        assert!((vac.expectation(&z1).unwrap() - c(1.0)).norm() < 1e-15);

        let bell = prepare_agp(2).unwrap();
        let zz = PauliString::from_letters(2, &[(1, Pauli::Z), (2, Pauli::Z)]).unwrap();
        let xx = PauliString::from_letters(2, &[(1, Pauli::X), (2, Pauli::X)]).unwrap();
        let yy = PauliString::from_letters(2, &[(1, Pauli::Y), (2, Pauli::Y)]).unwrap();
        assert!((bell.expectation(&zz).unwrap() - c(1.0)).norm() < 1e-12);
        assert!((bell.expectation(&xx).unwrap() - c(1.0)).norm() < 1e-12);
        assert!((bell.expectation(&yy).unwrap() - c(-1.0)).norm() < 1e-12);

        let wide = PauliString::from_letters(3, &[(3, Pauli::Z)]).unwrap();
        assert!(bell.expectation(&wide).is_err());
    }

    #[test]
    fn pair_parity_is_even() {
        for r in [2, 4, 8, 12] {
            let s = prepare_agp(r).unwrap();
            for j in 1..=r / 2 {
                let zz = PauliString::from_letters(r, &[(2 * j - 1, Pauli::Z), (2 * j, Pauli::Z)])
                    .unwrap();
                assert!((s.expectation(&zz).unwrap() - c(1.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn projection_examples() {
        let s4 = prepare_agp(4).unwrap();
        let (p, w) = s4.project_particle_number(2).unwrap();
        assert!((w - 0.5).abs() < 1e-15);
        let p = p.unwrap();
        for (i, a) in p.amplitudes().iter().enumerate() {
            let e = if i == 3 || i == 12 { FRAC_1_SQRT_2 } else { 0.0 };
            assert!((a - c(e)).norm() < 1e-15);
        }

        let s14 = prepare_agp(14).unwrap();
        let (p3, w3) = s14.project_particle_number(3).unwrap();
        assert!(p3.is_none());
        assert_eq!(w3, 0.0);

        let (p0, w0) = s14.project_particle_number(0).unwrap();
        assert!((w0 - 1.0 / 128.0).abs() < 1e-15);
        assert!((p0.unwrap().amplitude(0) - c(1.0)).norm() < 1e-12);

        assert!(s14.project_particle_number(15).is_err());
    }

    #[test]
    fn agp_number_distribution_is_binomial() {
        let r = 12;
        let m = r / 2;
        let s = prepare_agp(r).unwrap();
        let mut binom = 1.0;
        for n in 0..=r {
            let (_, w) = s.project_particle_number(n).unwrap();
            if n % 2 == 1 {
                assert_eq!(w, 0.0);
                continue;
            }
            let k = n / 2;
            if k > 0 {
                binom = binom * (m + 1 - k) as f64 / k as f64;
            }
            assert!((w - binom / 2f64.powi(m as i32)).abs() < 1e-14, "N={n}");
        }
    }
}
