//! Brute-force ground truth.
//!
//! Everything here works directly on basis states with explicit
//! Jordan-Wigner parity signs and never touches the Pauli-expansion path,
//! so it can referee [`crate::pairing`] and [`crate::rdm`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{AgpError, Result};
use crate::pairing::{Component, PairIndex};
use crate::rdm::{GeminalMatrix, Sector};
use crate::statevector::StateVector;

/// Largest register the brute-force 2-RDM accepts.
pub const ORACLE_MAX_QUBITS: usize = 14;

type Sparse = Vec<(usize, Complex64)>;

/// Two-particle RDM over ordered orbital pairs,
/// `D[(p,q)][(s,t)] = <a^dag_p a^dag_q a_t a_s>`, rows and columns laid out
/// row-major over `p != q` (1-based orbitals).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoRdm {
    num_qubits: usize,
    pairs: Vec<(usize, usize)>,
    matrix: DMatrix<Complex64>,
}

fn ordered_pairs(r: usize) -> Vec<(usize, usize)> {
    (1..=r).flat_map(|p| (1..=r).filter(move |&q| q != p).map(move |q| (p, q))).collect()
}

/// `a_orbital` on a sparse state with the parity sign of the lower orbitals.
fn annihilate(orbital: usize, psi: &Sparse) -> Sparse {
    let bit = 1usize << (orbital - 1);
    let mut out: Sparse = psi
        .iter()
        .filter(|(x, _)| x & bit != 0)
        .map(|&(x, a)| {
            let sign = if (x & (bit - 1)).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            (x ^ bit, a * sign)
        })
        .collect();
    out.sort_unstable_by_key(|&(x, _)| x);
    out
}

fn inner(bra: &Sparse, ket: &Sparse) -> Complex64 {
    let (mut i, mut j) = (0, 0);
    let mut acc = Complex64::new(0.0, 0.0);
    while i < bra.len() && j < ket.len() {
        match bra[i].0.cmp(&ket[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += bra[i].1.conj() * ket[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Every entry of the ordered-pair 2-RDM, via `D = <a_q a_p psi | a_t a_s psi>`.
pub fn brute_force_2rdm(state: &StateVector) -> Result<TwoRdm> {
    let r = state.num_qubits();
    if r > ORACLE_MAX_QUBITS {
        return Err(AgpError::Capacity { requested: r, max: ORACLE_MAX_QUBITS });
    }
    let psi: Sparse = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(x, &a)| (x, a))
        .collect();
    let pairs = ordered_pairs(r);
    let reduced: Vec<Sparse> = pairs.iter().map(|&(p, q)| annihilate(q, &annihilate(p, &psi))).collect();
    let n = pairs.len();
    let mut matrix = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let d = inner(&reduced[i], &reduced[j]);
            matrix[(i, j)] = d;
            matrix[(j, i)] = d.conj();
        }
    }
    Ok(TwoRdm { num_qubits: r, pairs, matrix })
}

impl TwoRdm {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    fn index(&self, (p, q): (usize, usize)) -> usize {
        let r = self.num_qubits;
        assert!(p != q && (1..=r).contains(&p) && (1..=r).contains(&q), "bad orbital pair ({p},{q})");
        (p - 1) * (r - 1) + if q < p { q - 1 } else { q - 2 }
    }

    pub fn entry(&self, row: (usize, usize), col: (usize, usize)) -> Complex64 {
        self.matrix[(self.index(row), self.index(col))]
    }

    /// Trace over ordered pairs, `N(N-1)` on an N-particle state.
    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|c| c.re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        crate::rdm::hermiticity_defect(&self.matrix)
    }

    /// Largest violation of `D[(p,q)][(s,t)] = -D[(q,p)][(s,t)] = -D[(p,q)][(t,s)]`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &row in &self.pairs {
            for &col in &self.pairs {
                let d = self.entry(row, col);
                worst = worst
                    .max((d + self.entry((row.1, row.0), col)).norm())
                    .max((d + self.entry(row, (col.1, col.0))).norm());
            }
        }
        worst
    }

    /// Restriction to the `2m` ordered pairs `(2p-1, 2p)` and `(2p, 2p-1)`.
    pub fn paired_subspace(&self) -> DMatrix<Complex64> {
        let m = self.num_qubits / 2;
        let labels: Vec<(usize, usize)> =
            (1..=m).map(|p| (2 * p - 1, 2 * p)).chain((1..=m).map(|p| (2 * p, 2 * p - 1))).collect();
        DMatrix::from_fn(2 * m, 2 * m, |i, j| self.entry(labels[i], labels[j]))
    }

    /// Row-major CSV of the full matrix with `re+imj` cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.matrix.nrows() {
            let row: Vec<String> = (0..self.matrix.ncols())
                .map(|j| {
                    let c = self.matrix[(i, j)];
                    format!("{}{:+}j", c.re, c.im)
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// `K[p][q] = D[(2p-1, 2p)][(2q-1, 2q)]`.
pub fn geminal_block_of(rdm: &TwoRdm) -> Result<GeminalMatrix> {
    let r = rdm.num_qubits();
    if r < 2 || r % 2 != 0 {
        return Err(AgpError::invalid(format!("geminal block needs even r >= 2, got {r}")));
    }
    let m = r / 2;
    GeminalMatrix::new(DMatrix::from_fn(m, m, |p, q| {
        rdm.entry((2 * p + 1, 2 * p + 2), (2 * q + 1, 2 * q + 2))
    }))
}

/// Largest geminal eigenvalue of the ideal AGP state: `1/2 + (m-1)/4` for
/// the ensemble and `n(m-n+1)/m` for sector `N = 2n` (`m = r/2`).
pub fn closed_form_lambda(sector: Sector, r: usize) -> Result<f64> {
    if r % 2 != 0 {
        return Err(AgpError::invalid(format!("closed forms need even r, got {r}")));
    }
    let m = (r / 2) as f64;
    match sector {
        Sector::Ensemble if r == 0 => Ok(0.0),
        Sector::Ensemble => Ok(0.5 + (m - 1.0) / 4.0),
        Sector::Particles(n) if n % 2 != 0 || n > r => {
            Err(AgpError::invalid(format!("sector N={n} is empty for the paired state on r={r}")))
        }
        Sector::Particles(0) => Ok(0.0),
        Sector::Particles(n) => {
            let k = (n / 2) as f64;
            Ok(k * (m - k + 1.0) / m)
        }
    }
}

/// Dense `a^dag_j` (or `sigma^+_j` without the string) from basis action.
pub fn dense_creation(orbital: usize, r: usize, with_string: bool) -> DMatrix<Complex64> {
    let dim = 1usize << r;
    let bit = 1usize << (orbital - 1);
    let mut m = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        if x & bit == 0 {
            let odd = (x & (bit - 1)).count_ones() % 2 == 1;
            let sign = if with_string && odd { -1.0 } else { 1.0 };
            m[(x | bit, x)] = Complex64::new(sign, 0.0);
        }
    }
    m
}

/// Dense `a^dag_{2p} a^dag_{2p-1}` (or the string-free product).
pub fn dense_pair_creation(p: PairIndex, r: usize, with_strings: bool) -> DMatrix<Complex64> {
    let (lo, hi) = p.orbitals();
    dense_creation(hi, r, with_strings) * dense_creation(lo, r, with_strings)
}

/// Dense hopper `P^dag_p P_q + h.c.` or `i (P^dag_q P_p - P^dag_p P_q)`.
pub fn dense_pair_hopper(p: PairIndex, q: PairIndex, component: Component, r: usize) -> DMatrix<Complex64> {
    let cp = dense_pair_creation(p, r, false);
    let cq = dense_pair_creation(q, r, false);
    let forward = &cp * cq.adjoint();
    let backward = &cq * cp.adjoint();
    match component {
        Component::Real => forward + backward,
        Component::Imaginary => (backward - forward) * Complex64::i(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdm::{largest_eigenvalue, spectrum};
    use crate::statevector::prepare_agp;

    #[test]
    fn single_configuration() {
        // Orbitals 1 and 2 occupied.
        let s = StateVector::basis_state(4, 0b0011).unwrap();
        let d = brute_force_2rdm(&s).unwrap();
        assert!((d.entry((1, 2), (1, 2)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((d.entry((2, 1), (1, 2)) + Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((d.trace() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_is_zero() {
        let d = brute_force_2rdm(&StateVector::new_zero_state(4).unwrap()).unwrap();
        assert_eq!(d.matrix().shape(), (12, 12));
        assert!(d.matrix().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn two_particle_sector_of_r4() {
        let (s, _) = prepare_agp(4).unwrap().project_particle_number(2).unwrap();
        let d = brute_force_2rdm(&s.unwrap()).unwrap();
        let (top, _) = largest_eigenvalue(d.matrix()).unwrap();
        assert!((top - 2.0).abs() < 1e-12);
    }

    #[test]
    fn geminal_blocks() {
        let k = geminal_block_of(&brute_force_2rdm(&prepare_agp(4).unwrap()).unwrap()).unwrap();
        let expected = [0.5, 0.25, 0.25, 0.5];
        for (i, e) in expected.iter().enumerate() {
            assert!((k.entries()[(i / 2, i % 2)] - Complex64::new(*e, 0.0)).norm() < 1e-12);
        }
        let (s, _) = prepare_agp(6).unwrap().project_particle_number(4).unwrap();
        let k = geminal_block_of(&brute_force_2rdm(&s.unwrap()).unwrap()).unwrap();
        let (l, _) = largest_eigenvalue(k.entries()).unwrap();
        assert!((l - 4.0 / 3.0).abs() < 1e-12);
        let k = geminal_block_of(&brute_force_2rdm(&StateVector::all_ones(6).unwrap()).unwrap()).unwrap();
        assert!((k.entries() - DMatrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn paired_subspace_has_doubled_spectrum() {
        let d = brute_force_2rdm(&prepare_agp(6).unwrap()).unwrap();
        let k = geminal_block_of(&d).unwrap();
        let (lk, _) = largest_eigenvalue(k.entries()).unwrap();
        let s = spectrum(&d.paired_subspace()).unwrap();
        assert!((s[0] - 2.0 * lk).abs() < 1e-12);
        assert!(s[3..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn closed_forms() {
        assert!((closed_form_lambda(Sector::Particles(8), 14).unwrap() - 16.0 / 7.0).abs() < 1e-15);
        for r in [2, 4, 10, 14] {
            assert!((closed_form_lambda(Sector::Particles(2), r).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((closed_form_lambda(Sector::Ensemble, 8).unwrap() - 1.25).abs() < 1e-15);
        assert_eq!(closed_form_lambda(Sector::Ensemble, 0).unwrap(), 0.0);
        assert!(closed_form_lambda(Sector::Particles(3), 8).is_err());
        assert!(closed_form_lambda(Sector::Ensemble, 5).is_err());
    }

    #[test]
    fn capacity() {
        let s = StateVector::new_zero_state(16).unwrap();
        assert!(matches!(brute_force_2rdm(&s), Err(AgpError::Capacity { max: 14, .. })));
    }
}
