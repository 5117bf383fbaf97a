//! Correlator estimates from a counts table, with worst-case sampling bounds.
//!
//! * `epsilon_i = 1/2 [ P(bit i = 1 | ground) + P(bit i = 0 | qubit i excited) ]`
//! * `A_ij = P(bit i = 1 | ground) - P(bit i = 1 | qubit j excited)`
//! * `C_ij = P(bits i, j = 0 | ground) - P(bit i = 0 | ground) P(bit j = 0 | ground)`
//!
//! `A` is not symmetric; `A_ij` and `A_ji` are separate estimates. Diagonals of
//! `A` and `C` are masked. Estimates are reported as measured, without clipping.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bits::Histogram;
use crate::error::{Error, Result};
use crate::io;
use crate::protocol::CountsTable;

/// `n x n` matrix whose diagonal is masked (`None`). Serializes as nested arrays with `null`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorMatrix {
    n: usize,
    data: Vec<Option<f64>>,
}

impl CorrelatorMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push((i != j).then(|| f(i, j)));
            }
        }
        CorrelatorMatrix { n, data }
    }

    /// Evaluates `f` once per unordered pair and mirrors it, so the result is exactly symmetric.
    pub fn symmetric_from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![None; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                data[i * n + j] = Some(v);
                data[j * n + i] = Some(v);
            }
        }
        CorrelatorMatrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Option<f64>>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::validation("correlator matrix must be square"));
        }
        Ok(CorrelatorMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Option<f64>>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Unmasked entries in row-major order.
    pub fn off_diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        self.data.iter().flatten().copied()
    }

    pub fn max_abs_diff(&self, other: &CorrelatorMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| match (a, b) {
                (Some(x), Some(y)) => (x - y).abs(),
                (None, None) => 0.0,
                _ => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }

    /// One row per `i`, masked cells left empty.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|c| c.map(|v| v.to_string()).unwrap_or_default())
                .collect();
            w.write_record(&cells).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|cell| {
                    if cell.is_empty() {
                        Ok(None)
                    } else {
                        cell.parse::<f64>()
                            .map(Some)
                            .map_err(|_| Error::validation(format!("csv: \"{cell}\" is not a number")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        CorrelatorMatrix::from_rows(rows)
    }
}

impl Serialize for CorrelatorMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CorrelatorMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Option<f64>>>::deserialize(d)?;
        CorrelatorMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Worst-case standard errors at `N` shots. A single estimated probability has
/// standard error `sqrt(p(1-p)/N) <= 1/(2 sqrt N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingBounds {
    /// `1/(2 sqrt N)`, bound for one estimated outcome probability.
    pub single_prob: f64,
    /// `1/sqrt(2N)`: epsilon combines two probabilities, A subtracts two.
    #[serde(rename = "eps_or_A")]
    pub eps_or_a: f64,
    /// `1/(2 sqrt N)`: C comes from one two-qubit distribution.
    #[serde(rename = "C")]
    pub c: f64,
    /// `1/sqrt(2N)`, applicable to all three quantities.
    pub global: f64,
}

pub fn sampling_bounds(shots: u64) -> Result<SamplingBounds> {
    if shots == 0 {
        return Err(Error::validation("sampling bounds need at least one shot"));
    }
    let n = shots as f64;
    let half_inv_sqrt = 1.0 / (2.0 * n.sqrt());
    let inv_sqrt_2n = 1.0 / (2.0 * n).sqrt();
    Ok(SamplingBounds {
        single_prob: half_inv_sqrt,
        eps_or_a: inv_sqrt_2n,
        c: half_inv_sqrt,
        global: inv_sqrt_2n,
    })
}

/// Estimated (or exact) epsilon, A and C for one device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelatorSet {
    pub num_qubits: usize,
    /// True for infinite-shot values from the enumeration oracle.
    #[serde(default)]
    pub exact: bool,
    /// `None` for exact values.
    pub shots: Option<u64>,
    pub epsilon: Vec<f64>,
    #[serde(rename = "A")]
    pub a: CorrelatorMatrix,
    #[serde(rename = "C")]
    pub c: CorrelatorMatrix,
    pub bounds: Option<SamplingBounds>,
}

impl CorrelatorSet {
    pub(crate) fn exact(n: usize, epsilon: Vec<f64>, a: CorrelatorMatrix, c: CorrelatorMatrix) -> Self {
        CorrelatorSet {
            num_qubits: n,
            exact: true,
            shots: None,
            epsilon,
            a,
            c,
            bounds: None,
        }
    }

    fn validate(self) -> Result<Self> {
        let n = self.num_qubits;
        if self.epsilon.len() != n || self.a.num_qubits() != n || self.c.num_qubits() != n {
            return Err(Error::validation(format!(
                "correlator set: num_qubits is {n} but epsilon/A/C have sizes {}/{}/{}",
                self.epsilon.len(),
                self.a.num_qubits(),
                self.c.num_qubits()
            )));
        }
        for i in 0..n {
            if self.a.get(i, i).is_some() || self.c.get(i, i).is_some() {
                return Err(Error::validation(format!(
                    "correlator set: diagonal entry ({i},{i}) must be null"
                )));
            }
        }
        Ok(self)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let set: CorrelatorSet = serde_json::from_str(text).map_err(|e| Error::parse("correlators", e))?;
        set.validate()
    }

    pub fn load(path: &Path) -> Result<Self> {
        CorrelatorSet::from_json_str(&io::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        io::to_json_pretty(self)
    }

    /// Largest absolute difference across epsilon, A and C.
    pub fn max_abs_diff(&self, other: &CorrelatorSet) -> f64 {
        let eps = self
            .epsilon
            .iter()
            .zip(&other.epsilon)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        eps.max(self.a.max_abs_diff(&other.a))
            .max(self.c.max_abs_diff(&other.c))
    }
}

/// Shots recorded in a histogram, and how many of them read 1 on each of the first `n` qubits.
fn one_counts(hist: &Histogram, n: usize) -> (u64, Vec<u64>) {
    let mut ones = vec![0u64; n];
    let mut total = 0;
    for (key, &count) in hist {
        total += count;
        for (slot, c) in ones.iter_mut().zip(key.bytes()) {
            if c == b'1' {
                *slot += count;
            }
        }
    }
    (total, ones)
}

/// Fraction of shots whose bit `i` reads 1.
pub fn marginal_one_prob(hist: &Histogram, i: usize) -> Result<f64> {
    let width = hist
        .keys()
        .next()
        .map(|k| k.len())
        .ok_or_else(|| Error::validation("histogram is empty"))?;
    if i >= width {
        return Err(Error::validation(format!(
            "qubit {i} out of range for {width}-bit histogram"
        )));
    }
    let (total, ones) = one_counts(hist, i + 1);
    if total == 0 {
        return Err(Error::validation("histogram has zero shots"));
    }
    Ok(ones[i] as f64 / total as f64)
}

fn one_probs(hist: &Histogram, n: usize) -> Vec<f64> {
    let (total, ones) = one_counts(hist, n);
    ones.iter().map(|&c| c as f64 / total as f64).collect()
}

pub fn estimate_epsilon(counts: &CountsTable) -> Vec<f64> {
    let n = counts.num_qubits();
    let ground = one_probs(counts.ground(), n);
    (0..n)
        .map(|i| {
            let excited_one = one_probs(counts.excited(i), n)[i];
            0.5 * (ground[i] + (1.0 - excited_one))
        })
        .collect()
}

pub fn estimate_a(counts: &CountsTable) -> CorrelatorMatrix {
    let n = counts.num_qubits();
    let ground = one_probs(counts.ground(), n);
    let excited: Vec<Vec<f64>> = (0..n).map(|j| one_probs(counts.excited(j), n)).collect();
    CorrelatorMatrix::from_fn(n, |i, j| ground[i] - excited[j][i])
}

/// Read-0 covariance over the ground-state histogram.
///
/// Joint zero counts use `n00 = N - n1_i - n1_j + n11`, which only needs the
/// positions of 1 bits in each outcome.
pub fn estimate_c(counts: &CountsTable) -> CorrelatorMatrix {
    let n = counts.num_qubits();
    let ground = counts.ground();
    let (total, ones) = one_counts(ground, n);
    let mut both_one = vec![0u64; n * n];
    let mut set_bits = Vec::with_capacity(n);
    for (key, &count) in ground {
        set_bits.clear();
        set_bits.extend(key.bytes().enumerate().filter(|&(_, c)| c == b'1').map(|(k, _)| k));
        for (a, &i) in set_bits.iter().enumerate() {
            for &j in &set_bits[a + 1..] {
                both_one[i * n + j] += count;
            }
        }
    }
    let shots = total as f64;
    CorrelatorMatrix::symmetric_from_fn(n, |i, j| {
        let both_zero = total - ones[i] - ones[j] + both_one[i * n + j];
        let zero_i = (total - ones[i]) as f64 / shots;
        let zero_j = (total - ones[j]) as f64 / shots;
        both_zero as f64 / shots - zero_i * zero_j
    })
}

pub fn characterize(counts: &CountsTable) -> Result<CorrelatorSet> {
    Ok(CorrelatorSet {
        num_qubits: counts.num_qubits(),
        exact: false,
        shots: Some(counts.shots()),
        epsilon: estimate_epsilon(counts),
        a: estimate_a(counts),
        c: estimate_c(counts),
        bounds: Some(sampling_bounds(counts.shots())?),
    })
}
