//! Generative model of correlated readout noise.
//!
//! Each shot reads bit `b_i = s_i ^ F_i ^ (xor of G_ij over pairs containing i)` where
//! `s` is the true (prepared) state, `F_i` is an individual flip with a probability
//! that depends on `s_i` and on the true state of spectator qubits, and `G_ij` are
//! independent pair-flip events acting on both readout bits of `i` and `j`.
//!
//! Spectator terms produce A-type correlations; pair-flip events produce C-type
//! covariance. The same model drives both the Monte Carlo sampler and the exact
//! enumeration oracle, so estimators can be checked against ground truth.
//!
//! `<E_b^i>_s` for this classical model is the probability of reading `b` on qubit
//! `i` when the true state is `s`. Noise acts only at readout; preparation errors
//! are not modeled separately.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{self, Histogram};
use crate::error::{Error, Result};
use crate::estimators::{CorrelatorMatrix, CorrelatorSet};
use crate::io;

/// Default exact-enumeration guard: `2^n * 2^pairs <= 2^24`.
pub const DEFAULT_MAX_ENUM: u128 = 1 << 24;

/// Dense distributions are never built beyond this many qubits, whatever the guard says.
const MAX_DENSE_QUBITS: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    num_qubits: usize,
    p01: Vec<f64>,
    p10: Vec<f64>,
    /// `(i, j) -> delta`: shift of qubit i's flip probability while spectator j is truly 1.
    spectator01: BTreeMap<(usize, usize), f64>,
    spectator10: BTreeMap<(usize, usize), f64>,
    /// Keyed by `(i, j)` with `i < j`.
    pairflip: BTreeMap<(usize, usize), f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    num_qubits: usize,
    p01: Vec<f64>,
    p10: Vec<f64>,
    #[serde(default)]
    spectator01: Vec<(usize, usize, f64)>,
    #[serde(default)]
    spectator10: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pairflip: Vec<(usize, usize, f64)>,
}

/// Per-qubit flip probabilities for one true state, after spectator shifts and clamping.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveFlips {
    pub probs: Vec<f64>,
    /// Qubits whose shifted probability fell outside `[0, 1]` and was clamped.
    pub clamped: Vec<usize>,
}

fn check_probability(what: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::validation(format!(
            "{what} = {v} is not a probability in [0, 1]"
        )));
    }
    Ok(())
}

impl NoiseModel {
    /// Independent readout errors only.
    pub fn uncorrelated(p01: Vec<f64>, p10: Vec<f64>) -> Result<Self> {
        NoiseModel::new(p01, p10, &[], &[], &[])
    }

    pub fn noiseless(num_qubits: usize) -> Self {
        NoiseModel::uncorrelated(vec![0.0; num_qubits], vec![0.0; num_qubits]).expect("zero model is valid for n >= 1")
    }

    pub fn new(
        p01: Vec<f64>,
        p10: Vec<f64>,
        spectator01: &[(usize, usize, f64)],
        spectator10: &[(usize, usize, f64)],
        pairflip: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let n = p01.len();
        if n == 0 {
            return Err(Error::validation("noise model: num_qubits must be at least 1"));
        }
        if p10.len() != n {
            return Err(Error::validation(format!(
                "noise model: p01 has {n} entries but p10 has {}",
                p10.len()
            )));
        }
        for (i, &v) in p01.iter().enumerate() {
            check_probability(&format!("p01[{i}]"), v)?;
        }
        for (i, &v) in p10.iter().enumerate() {
            check_probability(&format!("p10[{i}]"), v)?;
        }
        let spectator01 = spectator_map("spectator01", n, spectator01)?;
        let spectator10 = spectator_map("spectator10", n, spectator10)?;
        let mut pairs = BTreeMap::new();
        for &(a, b, q) in pairflip {
            check_pair_indices("pairflip", n, a, b)?;
            check_probability(&format!("pairflip ({a},{b})"), q)?;
            if pairs.insert((a.min(b), a.max(b)), q).is_some() {
                return Err(Error::validation(format!(
                    "pairflip: duplicate entry for pair ({a},{b})"
                )));
            }
        }
        Ok(NoiseModel {
            num_qubits: n,
            p01,
            p10,
            spectator01,
            spectator10,
            pairflip: pairs,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let f: ModelFile = serde_json::from_str(text).map_err(|e| Error::parse("noise model", e))?;
        if f.p01.len() != f.num_qubits || f.p10.len() != f.num_qubits {
            return Err(Error::validation(format!(
                "noise model: num_qubits is {} but p01/p10 have {}/{} entries",
                f.num_qubits,
                f.p01.len(),
                f.p10.len()
            )));
        }
        NoiseModel::new(f.p01, f.p10, &f.spectator01, &f.spectator10, &f.pairflip)
    }

    pub fn load(path: &Path) -> Result<Self> {
        NoiseModel::from_json_str(&io::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        let triples = |m: &BTreeMap<(usize, usize), f64>| m.iter().map(|(&(i, j), &v)| (i, j, v)).collect();
        io::to_json_pretty(&ModelFile {
            num_qubits: self.num_qubits,
            p01: self.p01.clone(),
            p10: self.p10.clone(),
            spectator01: triples(&self.spectator01),
            spectator10: triples(&self.spectator10),
            pairflip: triples(&self.pairflip),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn p01(&self) -> &[f64] {
        &self.p01
    }

    pub fn p10(&self) -> &[f64] {
        &self.p10
    }

    pub fn pairflip(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.pairflip
    }

    fn check_state(&self, true_state: &[bool]) -> Result<()> {
        if true_state.len() != self.num_qubits {
            return Err(Error::validation(format!(
                "true state has length {} but the model has {} qubits",
                true_state.len(),
                self.num_qubits
            )));
        }
        Ok(())
    }

    pub fn effective_flip_probs(&self, true_state: &[bool]) -> Result<EffectiveFlips> {
        self.check_state(true_state)?;
        let mut raw: Vec<f64> = true_state
            .iter()
            .enumerate()
            .map(|(i, &s)| if s { self.p10[i] } else { self.p01[i] })
            .collect();
        for (&(i, j), &delta) in &self.spectator01 {
            if !true_state[i] && true_state[j] {
                raw[i] += delta;
            }
        }
        for (&(i, j), &delta) in &self.spectator10 {
            if true_state[i] && true_state[j] {
                raw[i] += delta;
            }
        }
        let mut clamped = Vec::new();
        for (i, p) in raw.iter_mut().enumerate() {
            if !(0.0..=1.0).contains(p) {
                clamped.push(i);
                *p = p.clamp(0.0, 1.0);
            }
        }
        Ok(EffectiveFlips { probs: raw, clamped })
    }

    /// Samples `shots` readouts of `true_state` from stream 0 of `seed`.
    pub fn sample_readout(&self, true_state: &[bool], shots: u64, seed: u64) -> Result<Histogram> {
        self.sample_readout_stream(true_state, shots, seed, 0)
    }

    /// Samples from an independent ChaCha stream selected by `(seed, stream)`.
    ///
    /// Per shot the generator is consumed as: one uniform per qubit in index
    /// order, then one uniform per pair-flip entry in `(i, j)` order.
    pub fn sample_readout_stream(&self, true_state: &[bool], shots: u64, seed: u64, stream: u64) -> Result<Histogram> {
        self.check_state(true_state)?;
        if shots == 0 {
            return Err(Error::validation("shots must be at least 1"));
        }
        let flips = self.effective_flip_probs(true_state)?.probs;
        let pairs: Vec<(usize, usize, f64)> = self.pairflip.iter().map(|(&(i, j), &q)| (i, j, q)).collect();
        let base: Vec<u8> = true_state.iter().map(|&b| if b { b'1' } else { b'0' }).collect();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut counts: HashMap<Vec<u8>, u64> = HashMap::new();
        let mut shot = base.clone();
        for _ in 0..shots {
            shot.copy_from_slice(&base);
            for (bit, &p) in shot.iter_mut().zip(&flips) {
                if rng.gen::<f64>() < p {
                    *bit ^= 1;
                }
            }
            for &(i, j, q) in &pairs {
                if rng.gen::<f64>() < q {
                    shot[i] ^= 1;
                    shot[j] ^= 1;
                }
            }
            match counts.get_mut(&shot) {
                Some(c) => *c += 1,
                None => {
                    counts.insert(shot.clone(), 1);
                }
            }
        }
        Ok(counts
            .into_iter()
            .map(|(k, v)| (String::from_utf8(k).expect("ascii bitstring"), v))
            .collect())
    }

    fn check_enumeration(&self, max_enum: u128) -> Result<()> {
        let log2_size = (self.num_qubits + self.pairflip.len()) as u32;
        let fits =
            self.num_qubits <= MAX_DENSE_QUBITS && 1u128.checked_shl(log2_size).is_some_and(|size| size <= max_enum);
        if !fits {
            return Err(Error::OracleTooLarge {
                log2_size,
                limit: max_enum,
            });
        }
        Ok(())
    }

    /// Exact outcome distribution, summing over every combination of individual
    /// flips and pair events. Refuses models with `2^n * 2^pairs > max_enum`.
    pub fn exact_distribution(&self, true_state: &[bool], max_enum: u128) -> Result<ExactDistribution> {
        self.check_state(true_state)?;
        self.check_enumeration(max_enum)?;
        let n = self.num_qubits;
        let flips = self.effective_flip_probs(true_state)?.probs;

        let start = true_state
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | (usize::from(b) << i));
        let mut probs = vec![0.0; 1 << n];
        probs[start] = 1.0;
        // Each independent event with probability p toggles `mask`: fold it in as an
        // XOR-convolution, which sums over both branches of that event.
        let mut apply = |mask: usize, p: f64| {
            if p == 0.0 {
                return;
            }
            let prev = probs.clone();
            for (x, slot) in probs.iter_mut().enumerate() {
                *slot = (1.0 - p) * prev[x] + p * prev[x ^ mask];
            }
        };
        for (i, &p) in flips.iter().enumerate() {
            apply(1 << i, p);
        }
        for (&(i, j), &q) in &self.pairflip {
            apply((1 << i) | (1 << j), q);
        }
        Ok(ExactDistribution { num_qubits: n, probs })
    }

    /// Infinite-shot values of epsilon, A and C, computed from exact distributions of
    /// the ground state and each single-excitation state.
    pub fn exact_correlators(&self, max_enum: u128) -> Result<CorrelatorSet> {
        let n = self.num_qubits;
        let ground = self.exact_distribution(&vec![false; n], max_enum)?;
        let excited: Vec<ExactDistribution> = (0..n)
            .map(|k| self.exact_distribution(&bits::one_hot(n, k), max_enum))
            .collect::<Result<_>>()?;

        let ground_one: Vec<f64> = (0..n).map(|i| ground.marginal_one(i)).collect();
        let epsilon = (0..n)
            .map(|i| 0.5 * (ground_one[i] + (1.0 - excited[i].marginal_one(i))))
            .collect();
        let a = CorrelatorMatrix::from_fn(n, |i, j| ground_one[i] - excited[j].marginal_one(i));
        let c = CorrelatorMatrix::symmetric_from_fn(n, |i, j| {
            ground.both_zero(i, j) - (1.0 - ground_one[i]) * (1.0 - ground_one[j])
        });
        Ok(CorrelatorSet::exact(n, epsilon, a, c))
    }
}

fn check_pair_indices(what: &str, n: usize, i: usize, j: usize) -> Result<()> {
    if i >= n || j >= n {
        return Err(Error::validation(format!(
            "{what}: entry ({i},{j}) has index out of range for {n} qubits"
        )));
    }
    if i == j {
        return Err(Error::validation(format!(
            "{what}: entry ({i},{i}) couples a qubit to itself"
        )));
    }
    Ok(())
}

fn spectator_map(what: &str, n: usize, entries: &[(usize, usize, f64)]) -> Result<BTreeMap<(usize, usize), f64>> {
    let mut map = BTreeMap::new();
    for &(i, j, delta) in entries {
        check_pair_indices(what, n, i, j)?;
        if !delta.is_finite() {
            return Err(Error::validation(format!("{what}: entry ({i},{j}) is not finite")));
        }
        if map.insert((i, j), delta).is_some() {
            return Err(Error::validation(format!("{what}: duplicate entry ({i},{j})")));
        }
    }
    Ok(map)
}

/// Probabilities over all `2^n` outcomes. Index bit `k` is qubit `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    num_qubits: usize,
    probs: Vec<f64>,
}

impl ExactDistribution {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, bitstring: &str) -> Result<f64> {
        let b = bits::parse_bitstring(bitstring, self.num_qubits)?;
        let idx = b
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &v)| acc | (usize::from(v) << i));
        Ok(self.probs[idx])
    }

    /// `(canonical bitstring, probability)` for every outcome.
    pub fn iter(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        let n = self.num_qubits;
        self.probs.iter().enumerate().map(move |(idx, &p)| {
            let s: String = (0..n).map(|k| if idx >> k & 1 == 1 { '1' } else { '0' }).collect();
            (s, p)
        })
    }

    pub fn marginal_one(&self, i: usize) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .filter(|(x, _)| x >> i & 1 == 1)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn both_zero(&self, i: usize, j: usize) -> f64 {
        let mask = (1 << i) | (1 << j);
        self.probs
            .iter()
            .enumerate()
            .filter(|(x, _)| x & mask == 0)
            .map(|(_, p)| p)
            .sum()
    }
}
