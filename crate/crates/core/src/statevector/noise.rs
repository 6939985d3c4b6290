use serde::{Deserialize, Serialize};

use crate::error::{AgpError, Result};

/// Stochastic gate and readout noise.
///
/// After each gate, with probability `p1` (one-qubit gates) or `p2`
/// (multi-qubit gates) a uniformly random non-identity Pauli is applied on
/// the gate's qubits. Each measured bit is then flipped with the readout
/// confusion probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub readout_01: f64,
    pub readout_10: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, readout_01: f64, readout_10: f64) -> Result<Self> {
        let model = NoiseModel { p1, p2, readout_01, readout_10 };
        model.validate()?;
        Ok(model)
    }

    /// Representative near-term magnitudes, for qualitative trend runs.
    pub fn device_like() -> Self {
        NoiseModel { p1: 0.002, p2: 0.02, readout_01: 0.03, readout_10: 0.03 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p1", self.p1),
            ("p2", self.p2),
            ("readout_01", self.readout_01),
            ("readout_10", self.readout_10),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(AgpError::invalid(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }

    pub fn gate_error_probability(&self, arity: usize) -> f64 {
        if arity == 1 {
            self.p1
        } else {
            self.p2
        }
    }

    pub fn has_gate_noise(&self) -> bool {
        self.p1 > 0.0 || self.p2 > 0.0
    }

    pub fn has_readout_noise(&self) -> bool {
        self.readout_01 > 0.0 || self.readout_10 > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probabilities_must_lie_in_unit_interval() {
        assert!(NoiseModel::new(0.1, 0.2, 0.0, 1.0).is_ok());
        assert!(NoiseModel::new(-0.1, 0.2, 0.0, 0.0).is_err());
        assert!(NoiseModel::new(0.0, 0.0, 1.5, 0.0).is_err());
        assert!(NoiseModel::new(0.0, f64::NAN, 0.0, 0.0).is_err());
        assert!(NoiseModel::device_like().validate().is_ok());
    }
}
