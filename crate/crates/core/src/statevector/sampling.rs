use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{max_qubits, Circuit, Gate, NoiseModel, StateVector};
use crate::error::{AgpError, Result};
use crate::pauli::{Pauli, PauliString};

/// Above this many cached amplitudes the noiseless prefix states are
/// recomputed per error pattern instead of being kept.
const PREFIX_CACHE_BUDGET: usize = 1 << 24;

/// Computational-basis outcome weights for one measurement setting.
///
/// Sampled histograms hold integer shot counts. Exact histograms hold the
/// outcome probabilities themselves and stand in for the infinite-shot
/// limit (their standard errors are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    num_qubits: usize,
    weights: BTreeMap<usize, f64>,
    exact: bool,
}

impl Histogram {
    pub fn from_counts(num_qubits: usize, counts: impl IntoIterator<Item = (usize, u64)>) -> Self {
        let mut weights = BTreeMap::new();
        for (outcome, n) in counts {
            if n > 0 {
                *weights.entry(outcome).or_insert(0.0) += n as f64;
            }
        }
        Histogram { num_qubits, weights, exact: false }
    }

    pub fn from_probabilities(num_qubits: usize, probs: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let weights = probs.into_iter().filter(|&(_, p)| p > 0.0).collect();
        Histogram { num_qubits, weights, exact: true }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Total shots (or total probability for an exact histogram).
    pub fn total(&self) -> f64 {
        self.weights.values().sum()
    }

    pub fn get(&self, outcome: usize) -> f64 {
        self.weights.get(&outcome).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Outcome probabilities of `state` after `rotation`, without noise.
pub fn exact_distribution(state: &StateVector, rotation: &Circuit) -> Result<Histogram> {
    let mut rotated = state.clone();
    rotated.apply_circuit(rotation)?;
    Ok(Histogram::from_probabilities(
        state.num_qubits(),
        rotated.probabilities().into_iter().enumerate(),
    ))
}

type ErrorPattern = Vec<(usize, u8)>;

/// Samples computational-basis outcomes after `rotation`.
///
/// With a noise model, a Pauli error pattern is drawn per shot, shots are
/// grouped by pattern and each distinct pattern is simulated once. Readout
/// flips are applied last. The result depends only on the inputs and
/// `seed`.
pub fn sample_shots(
    state: &StateVector,
    rotation: &Circuit,
    shots: u64,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> Result<Histogram> {
    if shots == 0 {
        return Err(AgpError::invalid("at least one shot is required"));
    }
    if rotation.num_qubits() != state.num_qubits() {
        return Err(AgpError::invalid(format!(
            "rotation acts on {} qubits, state has {}",
            rotation.num_qubits(),
            state.num_qubits()
        )));
    }
    if let Some(model) = noise {
        model.validate()?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcomes = sample_outcomes(state, rotation.gates(), shots, noise, &mut rng);
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for outcome in outcomes {
        *counts.entry(outcome).or_insert(0) += 1;
    }
    Ok(Histogram::from_counts(state.num_qubits(), counts))
}

/// Runs `circuit` on `|0...0>` and samples the outcomes, with the same
/// noise semantics as [`sample_shots`].
///
/// Qubits that no gate connects evolve independently, so each connected
/// block is simulated on its own register and the per-block shot lists are
/// shuffled before being joined. This keeps noisy sampling of circuits made
/// of small blocks cheap however wide the register is.
pub fn sample_circuit(circuit: &Circuit, shots: u64, noise: Option<&NoiseModel>, seed: u64) -> Result<Histogram> {
    let n = circuit.num_qubits();
    if n > max_qubits() {
        return Err(AgpError::Capacity { requested: n, max: max_qubits() });
    }
    if shots == 0 {
        return Err(AgpError::invalid("at least one shot is required"));
    }
    if let Some(model) = noise {
        model.validate()?;
    }
    let blocks = connected_blocks(circuit);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut joined = vec![0usize; shots as usize];
    for block in &blocks {
        let local = |q: usize| block.iter().position(|&b| b == q).expect("gate inside its block") + 1;
        let mut sub = Circuit::new(block.len());
        for gate in circuit.gates().iter().filter(|g| block.contains(&g.qubits()[0])) {
            sub.push(gate.relabeled(local))?;
        }
        let start = StateVector::new_zero_state(block.len())?;
        let mut outcomes = sample_outcomes(&start, sub.gates(), shots, noise, &mut rng);
        outcomes.shuffle(&mut rng);
        for (full, o) in joined.iter_mut().zip(outcomes) {
            for (i, &q) in block.iter().enumerate() {
                *full |= (o >> i & 1) << (q - 1);
            }
        }
    }
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for outcome in joined {
        *counts.entry(outcome).or_insert(0) += 1;
    }
    Ok(Histogram::from_counts(n, counts))
}

/// Qubit sets linked by multi-qubit gates, each sorted, ordered by their
/// lowest qubit.
fn connected_blocks(circuit: &Circuit) -> Vec<Vec<usize>> {
    let n = circuit.num_qubits();
    let mut parent: Vec<usize> = (0..=n).collect();
    fn root(parent: &mut [usize], mut q: usize) -> usize {
        while parent[q] != q {
            parent[q] = parent[parent[q]];
            q = parent[q];
        }
        q
    }
    for gate in circuit.gates() {
        let qs = gate.qubits();
        for &q in &qs[1..] {
            let (a, b) = (root(&mut parent, qs[0]), root(&mut parent, q));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for q in 1..=n {
        let r = root(&mut parent, q);
        blocks.entry(r).or_default().push(q);
    }
    blocks.into_values().collect()
}

/// Per-shot outcomes in pattern-grouped order, readout flips included.
fn sample_outcomes(
    state: &StateVector,
    gates: &[Gate],
    shots: u64,
    noise: Option<&NoiseModel>,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let mut patterns: BTreeMap<ErrorPattern, u64> = BTreeMap::new();
    match noise {
        Some(model) if model.has_gate_noise() => {
            for _ in 0..shots {
                let mut pattern = Vec::new();
                for (index, gate) in gates.iter().enumerate() {
                    let arity = gate.arity();
                    let p = model.gate_error_probability(arity);
                    if p > 0.0 && rng.gen::<f64>() < p {
                        let code = rng.gen_range(1..(1u32 << (2 * arity))) as u8;
                        pattern.push((index, code));
                    }
                }
                *patterns.entry(pattern).or_insert(0) += 1;
            }
        }
        _ => {
            patterns.insert(Vec::new(), shots);
        }
    }

    let mut prefix = PrefixStates::new(state, gates);
    let mut outcomes: Vec<usize> = Vec::with_capacity(shots as usize);
    for (pattern, count) in &patterns {
        let evolved = prefix.evolve(pattern);
        let cumulative: Vec<f64> = evolved
            .amplitudes()
            .iter()
            .scan(0.0, |acc, a| {
                *acc += a.norm_sqr();
                Some(*acc)
            })
            .collect();
        let total = *cumulative.last().expect("non-empty state");
        for _ in 0..*count {
            let u = rng.gen::<f64>() * total;
            let idx = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
            outcomes.push(idx);
        }
    }

    if let Some(model) = noise.filter(|m| m.has_readout_noise()) {
        for outcome in outcomes.iter_mut() {
            for bit in 0..state.num_qubits() {
                let flip = if *outcome >> bit & 1 == 0 { model.readout_01 } else { model.readout_10 };
                if flip > 0.0 && rng.gen::<f64>() < flip {
                    *outcome ^= 1 << bit;
                }
            }
        }
    }

    outcomes
}

/// Lazily computed noiseless states after each gate prefix.
struct PrefixStates<'a> {
    gates: &'a [Gate],
    cache: Vec<StateVector>,
    cache_enabled: bool,
}

impl<'a> PrefixStates<'a> {
    fn new(state: &StateVector, gates: &'a [Gate]) -> Self {
        let cache_enabled = state.amplitudes().len() * (gates.len() + 1) <= PREFIX_CACHE_BUDGET;
        PrefixStates { gates, cache: vec![state.clone()], cache_enabled }
    }

    fn prefix(&mut self, upto: usize) -> StateVector {
        if !self.cache_enabled {
            let mut s = self.cache[0].clone();
            for g in &self.gates[..upto] {
                s.apply_unchecked(g);
            }
            return s;
        }
        while self.cache.len() <= upto {
            let mut next = self.cache.last().expect("seeded").clone();
            next.apply_unchecked(&self.gates[self.cache.len() - 1]);
            self.cache.push(next);
        }
        self.cache[upto].clone()
    }

    /// Runs the circuit with the errors in `pattern` inserted after their gates.
    fn evolve(&mut self, pattern: &[(usize, u8)]) -> StateVector {
        let Some(&(first, _)) = pattern.first() else {
            return self.prefix(self.gates.len());
        };
        let mut state = self.prefix(first + 1);
        let mut errors = pattern.iter().peekable();
        for index in first..self.gates.len() {
            if index > first {
                state.apply_unchecked(&self.gates[index]);
            }
            while let Some(&&(at, code)) = errors.peek() {
                if at != index {
                    break;
                }
                let error = error_pauli(&self.gates[index], code, state.num_qubits());
                state.apply_pauli(&error).expect("error acts on gate qubits");
                errors.next();
            }
        }
        state
    }
}

/// Decodes a base-4 Pauli code over the gate's qubits (0=I, 1=X, 2=Y, 3=Z).
fn error_pauli(gate: &Gate, code: u8, num_qubits: usize) -> PauliString {
    let letters: Vec<(usize, Pauli)> = gate
        .qubits()
        .into_iter()
        .enumerate()
        .filter_map(|(i, q)| {
            let letter = match (code >> (2 * i)) & 3 {
                1 => Pauli::X,
                2 => Pauli::Y,
                3 => Pauli::Z,
                _ => return None,
            };
            Some((q, letter))
        })
        .collect();
    PauliString::from_letters(num_qubits, &letters).expect("gate qubits validated")
}
