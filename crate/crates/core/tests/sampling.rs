use agp_core::pairing::MeasurementSetting;
use agp_core::statevector::{exact_distribution, prepare_agp, sample_shots, Circuit, NoiseModel, StateVector};

#[test]
fn bell_pair_frequencies() {
    let s = prepare_agp(2).unwrap();
    let shots = 100_000;
    let h = sample_shots(&s, &Circuit::new(2), shots, None, 7).unwrap();
    assert_eq!(h.get(0b01) + h.get(0b10), 0.0);
    let sigma = (0.25 / shots as f64).sqrt();
    for outcome in [0b00, 0b11] {
        assert!((h.get(outcome) / shots as f64 - 0.5).abs() < 5.0 * sigma);
    }
}

#[test]
fn vacuum_readout_bias() {
    let s = StateVector::new_zero_state(3).unwrap();
    let noise = NoiseModel::new(0.0, 0.0, 0.1, 0.0).unwrap();
    let shots = 100_000;
    let h = sample_shots(&s, &Circuit::new(3), shots, Some(&noise), 3).unwrap();
    let sigma = (0.09 / shots as f64).sqrt();
    for bit in 0..3 {
        let ones: f64 = h.iter().filter(|(o, _)| o >> bit & 1 == 1).map(|(_, w)| w).sum();
        assert!((ones / shots as f64 - 0.1).abs() < 5.0 * sigma, "bit {bit}");
    }
}

#[test]
fn total_variation_shrinks_with_shots() {
    for r in [2, 4, 6] {
        let s = prepare_agp(r).unwrap();
        let rotation = if r >= 4 {
            let p = agp_core::pairing::PairIndex::new(1, r).unwrap();
            let q = agp_core::pairing::PairIndex::new(2, r).unwrap();
            MeasurementSetting::off_diagonal(p, q, agp_core::pairing::Component::Imaginary, r)
                .unwrap()
                .rotation()
                .clone()
        } else {
            Circuit::new(r)
        };
        let exact = exact_distribution(&s, &rotation).unwrap();
        for shots in [10_000u64, 100_000] {
            let h = sample_shots(&s, &rotation, shots, None, r as u64).unwrap();
            let tv: f64 = (0..1usize << r)
                .map(|o| (h.get(o) / shots as f64 - exact.get(o)).abs())
                .sum::<f64>()
                / 2.0;
            assert!(tv < 5.0 / (shots as f64).sqrt(), "r={r} shots={shots} tv={tv}");
        }
    }
}

#[test]
fn noisy_sampling_is_reproducible() {
    let s = prepare_agp(6).unwrap();
    let p = agp_core::pairing::PairIndex::new(1, 6).unwrap();
    let q = agp_core::pairing::PairIndex::new(3, 6).unwrap();
    let setting = MeasurementSetting::off_diagonal(p, q, agp_core::pairing::Component::Real, 6).unwrap();
    let noise = NoiseModel::device_like();
    let a = sample_shots(&s, setting.rotation(), 5000, Some(&noise), 99).unwrap();
    let b = sample_shots(&s, setting.rotation(), 5000, Some(&noise), 99).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.total(), 5000.0);
    let c = sample_shots(&s, setting.rotation(), 5000, Some(&noise), 100).unwrap();
    assert_ne!(a, c);
}

#[test]
fn noiseless_circuits_preserve_norm() {
    let mut s = prepare_agp(8).unwrap();
    for setting in agp_core::pairing::plan_settings(8).unwrap() {
        s.apply_circuit(setting.rotation()).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
