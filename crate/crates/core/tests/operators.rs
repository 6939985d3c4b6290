mod common;

use agp_core::fermion::{FermionOp, Ladder};
use agp_core::oracle::{dense_creation, dense_pair_creation, dense_pair_hopper};
use agp_core::pairing::{
    diagonal_pair_occupation, jw_pair_creation, pauli_expansion_pair_hopper, Component, PairIndex,
};
use agp_core::pauli::PauliSum;
use agp_core::Complex64;
use common::max_diff;
use nalgebra::DMatrix;

fn rebuild(r: usize, expansion: &[(f64, agp_core::pauli::PauliString)]) -> DMatrix<Complex64> {
    let dim = 1 << r;
    expansion
        .iter()
        .fold(DMatrix::zeros(dim, dim), |acc, (c, p)| acc + p.dense() * Complex64::new(*c, 0.0))
}

#[test]
fn single_ladder_images_match_basis_action() {
    for r in 1..=6 {
        for j in 1..=r {
            let op = FermionOp::product(Complex64::new(1.0, 0.0), vec![Ladder::Create(j)]);
            let jw = op.jordan_wigner(r).unwrap().dense();
            assert!(max_diff(&jw, &dense_creation(j, r, true)) < 1e-12, "r={r} j={j}");
            let local = PauliSum::raising(r, j).unwrap().dense();
            assert!(max_diff(&local, &dense_creation(j, r, false)) < 1e-12);
        }
    }
}

#[test]
fn strings_reduce_to_a_global_sign() {
    for r in (2..=8).step_by(2) {
        for p in 1..=r / 2 {
            let pi = PairIndex::new(p, r).unwrap();
            let with = jw_pair_creation(pi, r, true).unwrap().dense();
            let without = jw_pair_creation(pi, r, false).unwrap().dense();
            assert!(max_diff(&with, &(-without.clone())) < 1e-12, "r={r} p={p}");
            assert!(max_diff(&with, &dense_pair_creation(pi, r, true)) < 1e-12);
            assert!(max_diff(&without, &dense_pair_creation(pi, r, false)) < 1e-12);
        }
    }
}

#[test]
fn hopper_expansions_rebuild_the_operator() {
    for r in (4..=8).step_by(2) {
        for p in 1..=r / 2 {
            for q in 1..=r / 2 {
                if p == q {
                    continue;
                }
                let (pi, qi) = (PairIndex::new(p, r).unwrap(), PairIndex::new(q, r).unwrap());
                for component in [Component::Real, Component::Imaginary] {
                    let exp = pauli_expansion_pair_hopper(pi, qi, component, r).unwrap();
                    assert_eq!(exp.len(), 8);
                    assert!(exp.iter().all(|(c, _)| (c.abs() - 0.125).abs() < 1e-15));
                    let want = dense_pair_hopper(pi, qi, component, r);
                    assert!(max_diff(&rebuild(r, &exp), &want) < 1e-12, "r={r} ({p},{q}) {component:?}");
                }
            }
        }
    }
}

#[test]
fn diagonal_expansion_is_pair_number() {
    for r in (2..=8).step_by(2) {
        for p in 1..=r / 2 {
            let pi = PairIndex::new(p, r).unwrap();
            let c = dense_pair_creation(pi, r, false);
            let want = &c * c.adjoint();
            let got = rebuild(r, &diagonal_pair_occupation(pi, r).unwrap());
            assert!(max_diff(&got, &want) < 1e-12);
        }
    }
}

#[test]
fn imaginary_hopper_is_hermitian_and_odd_in_y() {
    let r = 6;
    let (p, q) = (PairIndex::new(1, r).unwrap(), PairIndex::new(3, r).unwrap());
    for (component, parity) in [(Component::Real, 0), (Component::Imaginary, 1)] {
        for (_, s) in pauli_expansion_pair_hopper(p, q, component, r).unwrap() {
            assert_eq!(s.count_y() % 2, parity);
            assert_eq!(s.support(), 0b11_0011);
        }
    }
}
