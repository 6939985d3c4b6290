use std::f64::consts::PI;
use std::fmt::Write;

use crate::error::{AgpError, Result};
use crate::statevector::{Circuit, Gate};

/// Renders `circuit` as OpenQASM 2.0, measuring each listed qubit into the
/// classical bit of the same position.
///
/// Output is LF-terminated and depends only on the inputs. Dense-matrix
/// gates have no standard spelling and are rejected.
pub fn export_circuit_text(circuit: &Circuit, measured_qubits: &[usize]) -> Result<String> {
    let r = circuit.num_qubits();
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{r}];");
    let _ = writeln!(out, "creg c[{r}];");
    for gate in circuit.gates() {
        let line = match *gate {
            Gate::H(q) => format!("h q[{}];", q - 1),
            Gate::X(q) => format!("x q[{}];", q - 1),
            Gate::Z(q) => format!("z q[{}];", q - 1),
            Gate::S(q) => format!("s q[{}];", q - 1),
            Gate::Ry { qubit, angle } => format!("ry({}) q[{}];", format_angle(angle), qubit - 1),
            Gate::Cnot { control, target } => format!("cx q[{}],q[{}];", control - 1, target - 1),
            Gate::Toffoli { controls, target } => {
                format!("ccx q[{}],q[{}],q[{}];", controls[0] - 1, controls[1] - 1, target - 1)
            }
            Gate::Unitary1 { .. } | Gate::Unitary2 { .. } => {
                return Err(AgpError::UnsupportedGate(gate.to_string()))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    for &q in measured_qubits {
        if q == 0 || q > r {
            return Err(AgpError::QubitIndex { index: q, num_qubits: r });
        }
        let _ = writeln!(out, "measure q[{}] -> c[{}];", q - 1, q - 1);
    }
    Ok(out)
}

/// Multiples of pi/4 are spelled symbolically, anything else in full
/// round-trip precision.
fn format_angle(angle: f64) -> String {
    let quarters = angle / (PI / 4.0);
    let k = quarters.round();
    if (quarters - k).abs() < 1e-12 {
        let k = k as i64;
        let sign = if k < 0 { "-" } else { "" };
        return match k.abs() {
            0 => "0".to_string(),
            1 => format!("{sign}pi/4"),
            2 => format!("{sign}pi/2"),
            4 => format!("{sign}pi"),
            n if n % 4 == 0 => format!("{sign}{}*pi", n / 4),
            n if n % 2 == 0 => format!("{sign}{}*pi/2", n / 2),
            n => format!("{sign}{n}*pi/4"),
        };
    }
    format!("{angle:?}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::agp_circuit;
    use num_complex::Complex64;

    #[test]
    fn bell_circuit_text() {
        let text = export_circuit_text(&agp_circuit(2).unwrap(), &[1, 2]).unwrap();
        let expected = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\n\
                        h q[0];\ncx q[0],q[1];\nmeasure q[0] -> c[0];\nmeasure q[1] -> c[1];\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn empty_single_qubit_circuit() {
        let text = export_circuit_text(&Circuit::new(1), &[1]).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.ends_with("measure q[0] -> c[0];\n"));
    }

    #[test]
    fn gate_line_count_for_r14() {
        let text = export_circuit_text(&agp_circuit(14).unwrap(), &[]).unwrap();
        let gate_lines = text.lines().filter(|l| l.starts_with("h ") || l.starts_with("cx ")).count();
        assert_eq!(gate_lines, 14);
        assert_eq!(text.lines().count(), 4 + 14);
    }

    #[test]
    fn dense_gates_are_rejected() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut c = Circuit::new(1);
        c.push(Gate::unitary1(1, [[zero, one], [one, zero]]).unwrap()).unwrap();
        assert!(matches!(export_circuit_text(&c, &[1]), Err(AgpError::UnsupportedGate(_))));
    }

    #[test]
    fn angles() {
        assert_eq!(format_angle(PI / 4.0), "pi/4");
        assert_eq!(format_angle(-PI / 4.0), "-pi/4");
        assert_eq!(format_angle(PI), "pi");
        assert_eq!(format_angle(3.0 * PI / 4.0), "3*pi/4");
        assert_eq!(format_angle(0.1), "0.1");
    }
}
