use std::fmt;

use num_complex::Complex64;

use crate::error::{AgpError, Result};

const UNITARY_TOL: f64 = 1e-12;

/// A single gate. Qubit indices are 1-based.
///
/// Dense unitaries use a local basis where the first listed qubit is the
/// least significant bit.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    S(usize),
    Ry { qubit: usize, angle: f64 },
    Cnot { control: usize, target: usize },
    Toffoli { controls: [usize; 2], target: usize },
    Unitary1 { qubit: usize, matrix: [[Complex64; 2]; 2] },
    Unitary2 { qubits: [usize; 2], matrix: [[Complex64; 4]; 4] },
}

impl Gate {
    pub fn unitary1(qubit: usize, matrix: [[Complex64; 2]; 2]) -> Result<Gate> {
        let rows: Vec<Vec<Complex64>> = matrix.iter().map(|r| r.to_vec()).collect();
        check_unitary(&rows)?;
        Ok(Gate::Unitary1 { qubit, matrix })
    }

    pub fn unitary2(qubits: [usize; 2], matrix: [[Complex64; 4]; 4]) -> Result<Gate> {
        let rows: Vec<Vec<Complex64>> = matrix.iter().map(|r| r.to_vec()).collect();
        check_unitary(&rows)?;
        Ok(Gate::Unitary2 { qubits, matrix })
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::S(q) => vec![q],
            Gate::Ry { qubit, .. } | Gate::Unitary1 { qubit, .. } => vec![qubit],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Toffoli { controls, target } => vec![controls[0], controls[1], target],
            Gate::Unitary2 { qubits, .. } => qubits.to_vec(),
        }
    }

    /// The same gate with every qubit index passed through `f`.
    pub fn relabeled(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self.clone() {
            Gate::H(q) => Gate::H(f(q)),
            Gate::X(q) => Gate::X(f(q)),
            Gate::Z(q) => Gate::Z(f(q)),
            Gate::S(q) => Gate::S(f(q)),
            Gate::Ry { qubit, angle } => Gate::Ry { qubit: f(qubit), angle },
            Gate::Cnot { control, target } => Gate::Cnot { control: f(control), target: f(target) },
            Gate::Toffoli { controls, target } => {
                Gate::Toffoli { controls: [f(controls[0]), f(controls[1])], target: f(target) }
            }
            Gate::Unitary1 { qubit, matrix } => Gate::Unitary1 { qubit: f(qubit), matrix },
            Gate::Unitary2 { qubits, matrix } => Gate::Unitary2 { qubits: [f(qubits[0]), f(qubits[1])], matrix },
        }
    }

    pub fn arity(&self) -> usize {
        self.qubits().len()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::Z(_) => "z",
            Gate::S(_) => "s",
            Gate::Ry { .. } => "ry",
            Gate::Cnot { .. } => "cx",
            Gate::Toffoli { .. } => "ccx",
            Gate::Unitary1 { .. } => "unitary1",
            Gate::Unitary2 { .. } => "unitary2",
        }
    }

    /// Checks target range, distinctness and (for dense kinds) unitarity.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for &q in &qubits {
            if q == 0 || q > num_qubits {
                return Err(AgpError::QubitIndex { index: q, num_qubits });
            }
        }
        for (i, a) in qubits.iter().enumerate() {
            if qubits[i + 1..].contains(a) {
                return Err(AgpError::invalid(format!(
                    "gate {} acts twice on qubit {a}",
                    self.name()
                )));
            }
        }
        match self {
            Gate::Unitary1 { matrix, .. } => {
                check_unitary(&matrix.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            }
            Gate::Unitary2 { matrix, .. } => {
                check_unitary(&matrix.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            }
            Gate::Ry { angle, .. } if !angle.is_finite() => {
                Err(AgpError::invalid("ry angle must be finite"))
            }
            _ => Ok(()),
        }
    }

    /// 2x2 matrix for single-qubit kinds.
    pub(crate) fn single_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match *self {
            Gate::H(_) => Some([[h, h], [h, -h]]),
            Gate::X(_) => Some([[zero, one], [one, zero]]),
            Gate::Z(_) => Some([[one, zero], [zero, -one]]),
            Gate::S(_) => Some([[one, zero], [zero, Complex64::i()]]),
            Gate::Ry { angle, .. } => {
                let (s, c) = (angle / 2.0).sin_cos();
                Some([
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ])
            }
            Gate::Unitary1 { matrix, .. } => Some(matrix),
            _ => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qubits = self.qubits();
        write!(f, "{}", self.name())?;
        if let Gate::Ry { angle, .. } = self {
            write!(f, "({angle})")?;
        }
        let list: Vec<String> = qubits.iter().map(|q| q.to_string()).collect();
        write!(f, " {}", list.join(","))
    }
}

fn check_unitary(rows: &[Vec<Complex64>]) -> Result<()> {
    let n = rows.len();
    for i in 0..n {
        for j in 0..n {
            let dot: Complex64 = (0..n).map(|k| rows[k][i].conj() * rows[k][j]).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            if (dot - expected).norm() > UNITARY_TOL {
                return Err(AgpError::invalid(format!(
                    "dense gate matrix is not unitary (U^dag U [{i}][{j}] = {dot})"
                )));
            }
        }
    }
    Ok(())
}

/// An ordered gate list on a fixed register.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends every gate of `other`, which must act on the same register.
    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.num_qubits != self.num_qubits {
            return Err(AgpError::invalid(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.num_qubits, self.num_qubits
            )));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    pub fn then(mut self, other: &Circuit) -> Result<Self> {
        self.extend(other)?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_and_repeated_targets() {
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.push(Gate::H(3)),
            Err(AgpError::QubitIndex { index: 3, num_qubits: 2 })
        ));
        assert!(matches!(c.push(Gate::H(0)), Err(AgpError::QubitIndex { .. })));
        assert!(matches!(
            c.push(Gate::Cnot { control: 1, target: 1 }),
            Err(AgpError::Validation(_))
        ));
        assert!(c.is_empty());
    }

    #[test]
    fn rejects_non_unitary_dense_matrix() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert!(Gate::unitary1(1, [[one, one], [zero, one]]).is_err());
        assert!(Gate::unitary1(1, [[zero, one], [one, zero]]).is_ok());
    }
}
