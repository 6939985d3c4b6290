//! Joint-basis measurement settings for the geminal block.
//!
//! Every off-diagonal component is read from one setting on the four
//! qubits `(a, b, c, d) = (2p-1, 2p, 2q-1, 2q)`. With `u = |1100>` and
//! `w = |0011>` (pair p filled or pair q filled), the hopper acts as
//! `|u><w| + |w><u|` and its +-1 eigenvectors are `(u +- w)/sqrt(2)`.
//!
//! The rotation first applies the CNOT ladder `b->c, a->b, a->d`, giving
//! the frame `(a, a^b, b^c, a^d)`. In that frame `u` and `w` differ only in
//! qubit `a` and sit at `b = 0, c = d = 1`. A Hadamard on `a` controlled by
//! `c` and `d` then sends the two eigenvectors to distinct outcomes. The
//! only other states it touches are `|1010>` and `|0101>`, which hold two
//! particles as well, so every outcome still carries a definite local
//! particle number. The controlled Hadamard is compiled as
//! `ry(-pi/4) h ccx h ry(pi/4)` on the target. The imaginary component
//! adds an `s` on `a` to rotate `(u +- i w)/sqrt(2)` onto the same pair.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use super::{Component, PairIndex};
use crate::error::{AgpError, Result};
use crate::statevector::{Circuit, Gate, Histogram};

/// Eigenvalue of the measured hopper and local particle number for one
/// 4-bit outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalOutcome {
    pub eigenvalue: i8,
    pub particles: u8,
}

/// Decode for all 16 local outcomes. Outcome bit 0 is qubit `2p-1`, bit 1
/// is `2p`, bit 2 is `2q-1`, bit 3 is `2q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeTable([LocalOutcome; 16]);

impl DecodeTable {
    fn joint_basis() -> Self {
        let mut table = [LocalOutcome { eigenvalue: 0, particles: 0 }; 16];
        for (outcome, entry) in table.iter_mut().enumerate() {
            let bit = |k: usize| (outcome >> k) & 1;
            let (a, b, c, d) = (bit(0), bit(1), bit(2), bit(3));
            *entry = if c == 1 && d == 1 {
                let eigenvalue = match (b, a) {
                    (0, 0) => 1,
                    (0, _) => -1,
                    _ => 0,
                };
                LocalOutcome { eigenvalue, particles: 2 }
            } else {
                let ya = a;
                let yb = a ^ b;
                let yc = yb ^ c;
                let yd = a ^ d;
                LocalOutcome { eigenvalue: 0, particles: (ya + yb + yc + yd) as u8 }
            };
        }
        DecodeTable(table)
    }

    pub fn get(&self, local: usize) -> LocalOutcome {
        self.0[local & 0xf]
    }

    pub fn entries(&self) -> &[LocalOutcome; 16] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SettingKind {
    /// Computational-basis readout of every pair occupation.
    Diagonal,
    OffDiagonal { p: PairIndex, q: PairIndex, component: Component },
}

/// Which geminal entry component an estimate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntryKind {
    Diagonal,
    Real,
    Imaginary,
}

/// Estimate of one real component of `K[row][col]` (1-based pair indices).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryEstimate {
    pub row: usize,
    pub col: usize,
    pub kind: EntryKind,
    pub value: f64,
    pub stderr: f64,
    /// Shots (or probability mass, for exact histograms) kept after filtering.
    pub retained: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    num_qubits: usize,
    kind: SettingKind,
    rotation: Circuit,
    decode: Option<DecodeTable>,
}

impl MeasurementSetting {
    pub fn diagonal(num_qubits: usize) -> Self {
        MeasurementSetting {
            num_qubits,
            kind: SettingKind::Diagonal,
            rotation: Circuit::new(num_qubits),
            decode: None,
        }
    }

    pub fn off_diagonal(p: PairIndex, q: PairIndex, component: Component, num_qubits: usize) -> Result<Self> {
        if p >= q {
            return Err(AgpError::invalid(format!(
                "off-diagonal settings need p < q, got ({}, {})",
                p.get(),
                q.get()
            )));
        }
        PairIndex::new(q.get(), num_qubits)?;
        let (a, b) = p.orbitals();
        let (c, d) = q.orbitals();
        let mut rotation = Circuit::new(num_qubits);
        rotation
            .push(Gate::Cnot { control: b, target: c })?
            .push(Gate::Cnot { control: a, target: b })?
            .push(Gate::Cnot { control: a, target: d })?;
        if component == Component::Imaginary {
            rotation.push(Gate::S(a))?;
        }
        rotation
            .push(Gate::Ry { qubit: a, angle: -FRAC_PI_4 })?
            .push(Gate::H(a))?
            .push(Gate::Toffoli { controls: [c, d], target: a })?
            .push(Gate::H(a))?
            .push(Gate::Ry { qubit: a, angle: FRAC_PI_4 })?;
        Ok(MeasurementSetting {
            num_qubits,
            kind: SettingKind::OffDiagonal { p, q, component },
            rotation,
            decode: Some(DecodeTable::joint_basis()),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn kind(&self) -> SettingKind {
        self.kind
    }

    pub fn rotation(&self) -> &Circuit {
        &self.rotation
    }

    pub fn decode(&self) -> Option<&DecodeTable> {
        self.decode.as_ref()
    }

    /// The four measured qubits of an off-diagonal setting.
    pub fn local_qubits(&self) -> Option<[usize; 4]> {
        match self.kind {
            SettingKind::Diagonal => None,
            SettingKind::OffDiagonal { p, q, .. } => {
                let (a, b) = p.orbitals();
                let (c, d) = q.orbitals();
                Some([a, b, c, d])
            }
        }
    }

    /// Deterministic file stem, e.g. `agp_r6_pair1_3_im`.
    pub fn file_stem(&self) -> String {
        match self.kind {
            SettingKind::Diagonal => format!("agp_r{}_diag", self.num_qubits),
            SettingKind::OffDiagonal { p, q, component } => format!(
                "agp_r{}_pair{}_{}_{}",
                self.num_qubits,
                p.get(),
                q.get(),
                match component {
                    Component::Real => "re",
                    Component::Imaginary => "im",
                }
            ),
        }
    }

    /// Estimates the entries this setting measures from a histogram taken
    /// after its rotation.
    ///
    /// With `particle_filter = Some(N)` only outcomes whose decoded total
    /// particle number equals `N` are kept. An empty selection fails with
    /// [`AgpError::EmptySector`].
    pub fn estimate(&self, histogram: &Histogram, particle_filter: Option<usize>) -> Result<Vec<EntryEstimate>> {
        if histogram.num_qubits() != self.num_qubits {
            return Err(AgpError::invalid(format!(
                "histogram over {} qubits given to a {}-qubit setting",
                histogram.num_qubits(),
                self.num_qubits
            )));
        }
        match self.kind {
            SettingKind::Diagonal => self.estimate_diagonal(histogram, particle_filter),
            SettingKind::OffDiagonal { p, q, component } => {
                self.estimate_off_diagonal(histogram, particle_filter, p, q, component)
            }
        }
    }

    fn estimate_diagonal(&self, histogram: &Histogram, filter: Option<usize>) -> Result<Vec<EntryEstimate>> {
        let m = self.num_qubits / 2;
        let mut retained = 0.0;
        let mut full = vec![0.0; m];
        for (outcome, w) in histogram.iter() {
            if filter.is_some_and(|n| outcome.count_ones() as usize != n) {
                continue;
            }
            retained += w;
            for (p, count) in full.iter_mut().enumerate() {
                let mask = 0b11 << (2 * p);
                if outcome & mask == mask {
                    *count += w;
                }
            }
        }
        if retained <= 0.0 {
            return Err(AgpError::EmptySector(filter.unwrap_or(0)));
        }
        Ok(full
            .into_iter()
            .enumerate()
            .map(|(p, count)| {
                let f = count / retained;
                let stderr = if histogram.is_exact() { 0.0 } else { (f * (1.0 - f) / retained).sqrt() };
                EntryEstimate { row: p + 1, col: p + 1, kind: EntryKind::Diagonal, value: f, stderr, retained }
            })
            .collect())
    }

    fn estimate_off_diagonal(
        &self,
        histogram: &Histogram,
        filter: Option<usize>,
        p: PairIndex,
        q: PairIndex,
        component: Component,
    ) -> Result<Vec<EntryEstimate>> {
        let decode = self.decode.as_ref().expect("off-diagonal settings carry a decode table");
        let [a, b, c, d] = self.local_qubits().expect("off-diagonal");
        let bits = [a - 1, b - 1, c - 1, d - 1];
        let local_mask: usize = bits.iter().map(|&k| 1usize << k).sum();
        let (mut retained, mut plus, mut minus) = (0.0, 0.0, 0.0);
        for (outcome, w) in histogram.iter() {
            let local: usize = bits.iter().enumerate().map(|(i, &k)| ((outcome >> k) & 1) << i).sum();
            let LocalOutcome { eigenvalue, particles } = decode.get(local);
            if let Some(n) = filter {
                let others = (outcome & !local_mask).count_ones() as usize;
                if particles as usize + others != n {
                    continue;
                }
            }
            retained += w;
            match eigenvalue {
                1 => plus += w,
                -1 => minus += w,
                _ => {}
            }
        }
        if retained <= 0.0 {
            return Err(AgpError::EmptySector(filter.unwrap_or(0)));
        }
        let (fp, fm) = (plus / retained, minus / retained);
        // The hopper expectation is twice the entry component.
        let value = (fp - fm) / 2.0;
        let stderr = if histogram.is_exact() {
            0.0
        } else {
            ((fp + fm - (fp - fm).powi(2)).max(0.0) / (4.0 * retained)).sqrt()
        };
        let kind = match component {
            Component::Real => EntryKind::Real,
            Component::Imaginary => EntryKind::Imaginary,
        };
        Ok(vec![EntryEstimate { row: p.get(), col: q.get(), kind, value, stderr, retained }])
    }
}

/// One diagonal setting, then a real and an imaginary setting for every
/// pair-pair `p < q`.
pub fn plan_settings(num_qubits: usize) -> Result<Vec<MeasurementSetting>> {
    if num_qubits < 2 || num_qubits % 2 != 0 {
        return Err(AgpError::invalid(format!(
            "tomography needs an even qubit count >= 2, got {num_qubits}"
        )));
    }
    let m = num_qubits / 2;
    let mut settings = vec![MeasurementSetting::diagonal(num_qubits)];
    for p in 1..=m {
        for q in p + 1..=m {
            let (pp, qq) = (PairIndex::new(p, num_qubits)?, PairIndex::new(q, num_qubits)?);
            for component in [Component::Real, Component::Imaginary] {
                settings.push(MeasurementSetting::off_diagonal(pp, qq, component, num_qubits)?);
            }
        }
    }
    Ok(settings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::pair_hopper;
    use crate::statevector::{exact_distribution, prepare_agp, StateVector};
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    #[test]
    fn setting_counts() {
        assert_eq!(plan_settings(2).unwrap().len(), 1);
        assert_eq!(plan_settings(4).unwrap().len(), 3);
        assert_eq!(plan_settings(14).unwrap().len(), 43);
        assert!(plan_settings(0).is_err());
        assert!(plan_settings(5).is_err());
    }

    #[test]
    fn decode_table_contract() {
        let table = DecodeTable::joint_basis();
        let mut plus = 0;
        let mut minus = 0;
        for e in table.entries() {
            match e.eigenvalue {
                1 => plus += 1,
                -1 => minus += 1,
                0 => {}
                other => panic!("bad eigenvalue {other}"),
            }
            if e.eigenvalue != 0 {
                assert_eq!(e.particles, 2);
            }
        }
        assert_eq!((plus, minus), (1, 1));
        let mut histogram = [0; 5];
        table.entries().iter().for_each(|e| histogram[e.particles as usize] += 1);
        assert_eq!(histogram, [1, 4, 6, 4, 1]);
    }

    fn rotation_unitary(setting: &MeasurementSetting) -> DMatrix<Complex64> {
        let r = setting.num_qubits();
        let dim = 1 << r;
        let mut u = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut s = StateVector::basis_state(r, col).unwrap();
            s.apply_circuit(setting.rotation()).unwrap();
            for row in 0..dim {
                u[(row, col)] = s.amplitude(row);
            }
        }
        u
    }

    /// Every outcome pulls back to an eigenvector of the hopper with the
    /// decoded eigenvalue and a definite local particle number.
    #[test]
    fn rotation_realizes_the_decode_table() {
        let r = 4;
        let p = PairIndex::new(1, r).unwrap();
        let q = PairIndex::new(2, r).unwrap();
        for component in [Component::Real, Component::Imaginary] {
            let setting = MeasurementSetting::off_diagonal(p, q, component, r).unwrap();
            let u = rotation_unitary(&setting);
            let hopper = pair_hopper(p, q, component, r).unwrap().dense();
            let decode = setting.decode().unwrap();
            for outcome in 0..16 {
                let pulled = u.adjoint().column(outcome).into_owned();
                let LocalOutcome { eigenvalue, particles } = decode.get(outcome);
                let residual = &hopper * &pulled - pulled.clone() * Complex64::new(eigenvalue as f64, 0.0);
                assert!(residual.norm() < 1e-12, "{component:?} outcome {outcome:04b}");
                for basis in 0..16usize {
                    if basis.count_ones() != particles as u32 {
                        assert!(pulled[basis].norm() < 1e-12, "outcome {outcome:04b} leaks into {basis:04b}");
                    }
                }
            }
        }
    }

    #[test]
    fn exact_estimates_on_agp() {
        let r = 4;
        let state = prepare_agp(r).unwrap();
        let settings = plan_settings(r).unwrap();
        let re = &settings[1];
        let h = exact_distribution(&state, re.rotation()).unwrap();
        let e = re.estimate(&h, None).unwrap()[0];
        assert!((e.value - 0.25).abs() < 1e-12);
        assert_eq!(e.stderr, 0.0);
        let e2 = re.estimate(&h, Some(2)).unwrap()[0];
        assert!((e2.value - 0.5).abs() < 1e-12);
        assert!((e2.retained - 0.5).abs() < 1e-12);
        assert!(matches!(re.estimate(&h, Some(3)), Err(AgpError::EmptySector(3))));

        let im = &settings[2];
        let h = exact_distribution(&state, im.rotation()).unwrap();
        assert!(im.estimate(&h, None).unwrap()[0].value.abs() < 1e-12);

        let diag = settings[0].estimate(&exact_distribution(&state, settings[0].rotation()).unwrap(), None).unwrap();
        assert_eq!(diag.len(), 2);
        assert!(diag.iter().all(|e| (e.value - 0.5).abs() < 1e-12));
    }

    #[test]
    fn file_stems() {
        let settings = plan_settings(6).unwrap();
        let stems: Vec<String> = settings.iter().map(|s| s.file_stem()).collect();
        assert_eq!(stems[0], "agp_r6_diag");
        assert_eq!(stems[1], "agp_r6_pair1_2_re");
        assert_eq!(stems[2], "agp_r6_pair1_2_im");
        assert_eq!(stems[6], "agp_r6_pair2_3_im");
    }
}
