use std::fs;
use std::path::{Path, PathBuf};

use agp_core::pairing::{export_circuit_text, plan_settings};
use agp_core::statevector::{agp_circuit, max_qubits, Circuit};
use anyhow::Context;
use clap::ValueEnum;

use crate::usage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportWhat {
    /// The preparation circuit alone.
    Prep,
    /// Preparation followed by each measurement rotation.
    Settings,
    All,
}

/// `(file name, qasm text)` for every requested circuit, in a fixed order.
pub fn export_texts(r: usize, what: ExportWhat) -> anyhow::Result<Vec<(String, String)>> {
    if r < 2 || r % 2 != 0 {
        return Err(usage(format!("export needs an even qubit count >= 2, got {r}")));
    }
    if r > max_qubits() {
        return Err(usage(format!("r={r} exceeds the {}-qubit capacity", max_qubits())));
    }
    let prep = agp_circuit(r)?;
    let measured: Vec<usize> = (1..=r).collect();
    let mut files = Vec::new();
    let mut add = |stem: String, circuit: &Circuit| -> anyhow::Result<()> {
        files.push((format!("{stem}.qasm"), export_circuit_text(circuit, &measured)?));
        Ok(())
    };
    if matches!(what, ExportWhat::Prep | ExportWhat::All) {
        add(format!("agp_r{r}_prep"), &prep)?;
    }
    if matches!(what, ExportWhat::Settings | ExportWhat::All) {
        for setting in plan_settings(r)? {
            add(setting.file_stem(), &prep.clone().then(setting.rotation())?)?;
        }
    }
    Ok(files)
}

/// Writes the circuits of [`export_texts`] into `dir`, creating it if needed.
pub fn export(r: usize, what: ExportWhat, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let files = export_texts(r, what)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    files
        .into_iter()
        .map(|(name, text)| {
            let path = dir.join(name);
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prep_for_two_qubits() {
        let files = export_texts(2, ExportWhat::Prep).unwrap();
        assert_eq!(files.len(), 1);
        assert_eq!(files[0].0, "agp_r2_prep.qasm");
        let gates = files[0].1.lines().filter(|l| l.starts_with("h ") || l.starts_with("cx ")).count();
        assert_eq!(gates, 2);
    }

    #[test]
    fn settings_for_fourteen_qubits() {
        let files = export_texts(14, ExportWhat::Settings).unwrap();
        assert_eq!(files.len(), 43);
        assert_eq!(files.iter().filter(|(n, _)| n.ends_with("_re.qasm") || n.ends_with("_im.qasm")).count(), 42);
        assert_eq!(files[0].0, "agp_r14_diag.qasm");
        assert!(files.iter().any(|(n, _)| n == "agp_r14_pair6_7_im.qasm"));
    }

    #[test]
    fn odd_register_is_a_usage_error() {
        let err = export_texts(5, ExportWhat::All).unwrap_err();
        assert!(err.downcast_ref::<crate::UsageError>().is_some());
    }
}
