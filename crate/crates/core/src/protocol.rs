//! The `n + 1` preparation protocol and the counts table it produces.
//!
//! The preparations are the all-zero ground state and, for each qubit `k`,
//! the state with only qubit `k` excited. Hardware counts ingested from files
//! conflate preparation and readout error; the simulator applies noise only at
//! readout.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::bits::{self, Histogram};
use crate::error::{Error, Result};
use crate::io;
use crate::noise_model::NoiseModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preparation {
    Ground,
    /// Only qubit `k` is in the 1 state.
    Excited(usize),
}

impl Preparation {
    /// File label: `ground` or `x_k`.
    pub fn label(&self) -> String {
        match self {
            Preparation::Ground => "ground".to_string(),
            Preparation::Excited(k) => format!("x_{k}"),
        }
    }

    pub fn true_state(&self, n: usize) -> Vec<bool> {
        match *self {
            Preparation::Ground => vec![false; n],
            Preparation::Excited(k) => bits::one_hot(n, k),
        }
    }

    /// Position in [`preparation_set`] order.
    pub fn index(&self) -> usize {
        match *self {
            Preparation::Ground => 0,
            Preparation::Excited(k) => k + 1,
        }
    }
}

impl fmt::Display for Preparation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `[GROUND, EXCITED(0), ..., EXCITED(n-1)]`.
pub fn preparation_set(n: usize) -> Result<Vec<Preparation>> {
    if n == 0 {
        return Err(Error::validation("preparation set needs at least one qubit"));
    }
    Ok(std::iter::once(Preparation::Ground)
        .chain((0..n).map(Preparation::Excited))
        .collect())
}

/// Anything that can turn a true state into a histogram of `shots` readouts.
pub trait Backend: Sync {
    /// `seed` and `stream` identify the random stream for this preparation;
    /// backends replaying recorded data may ignore them.
    fn run(&self, true_state: &[bool], shots: u64, seed: u64, stream: u64) -> Result<Histogram>;
}

pub struct SimulatorBackend<'a> {
    pub model: &'a NoiseModel,
}

impl Backend for SimulatorBackend<'_> {
    fn run(&self, true_state: &[bool], shots: u64, seed: u64, stream: u64) -> Result<Histogram> {
        self.model.sample_readout_stream(true_state, shots, seed, stream)
    }
}

/// Runs every preparation against `backend`. Preparation `p` draws from stream
/// `p.index()` of `seed`, so the result does not depend on execution order.
pub fn run_protocol<B: Backend + ?Sized>(backend: &B, n: usize, shots: u64, seed: u64) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::validation("shots must be at least 1"));
    }
    let preps = preparation_set(n)?;
    let histograms = preps
        .par_iter()
        .map(|prep| {
            let wrap = |source: Error| Error::Backend {
                label: prep.label(),
                source: Box::new(source),
            };
            let hist = backend
                .run(&prep.true_state(n), shots, seed, prep.index() as u64)
                .map_err(wrap)?;
            check_histogram(&hist, n, shots).map_err(wrap)?;
            Ok(hist)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CountsTable {
        num_qubits: n,
        shots,
        histograms,
    })
}

fn check_histogram(hist: &Histogram, n: usize, shots: u64) -> Result<()> {
    for key in hist.keys() {
        bits::parse_bitstring(key, n)?;
    }
    let total: u128 = hist.values().map(|&c| u128::from(c)).sum();
    if total != u128::from(shots) {
        return Err(Error::validation(format!(
            "count total mismatch: histogram sums to {total}, declared shots {shots}"
        )));
    }
    Ok(())
}

/// Character order of bitstrings in a counts file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitOrder {
    /// Leftmost character is qubit 0 (the canonical order).
    Msb,
    /// Rightmost character is qubit 0, as many hardware SDKs export.
    Lsb,
}

impl BitOrder {
    fn to_canonical(self, s: &str) -> String {
        match self {
            BitOrder::Msb => s.to_string(),
            BitOrder::Lsb => s.chars().rev().collect(),
        }
    }
}

impl FromStr for BitOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "msb" => Ok(BitOrder::Msb),
            "lsb" => Ok(BitOrder::Lsb),
            other => Err(Error::validation(format!(
                "unknown bit order \"{other}\" (expected msb or lsb)"
            ))),
        }
    }
}

/// One histogram per preparation, all with the same number of shots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsTable {
    num_qubits: usize,
    shots: u64,
    /// In [`preparation_set`] order.
    histograms: Vec<Histogram>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CountsFileIn {
    num_qubits: usize,
    shots: u64,
    #[serde(default)]
    bit_order: Option<BitOrder>,
    preparations: BTreeMap<String, BTreeMap<String, u64>>,
}

struct CountsFileOut<'a> {
    table: &'a CountsTable,
    order: BitOrder,
}

struct Preparations<'a>(&'a CountsFileOut<'a>);

struct ReorderedHistogram<'a>(&'a Histogram, BitOrder);

impl Serialize for CountsFileOut<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("num_qubits", &self.table.num_qubits)?;
        m.serialize_entry("shots", &self.table.shots)?;
        m.serialize_entry("bit_order", &self.order)?;
        m.serialize_entry("preparations", &Preparations(self))?;
        m.end()
    }
}

impl Serialize for Preparations<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let table = self.0.table;
        let mut m = s.serialize_map(Some(table.histograms.len()))?;
        for (k, hist) in table.histograms.iter().enumerate() {
            let label = if k == 0 {
                Preparation::Ground
            } else {
                Preparation::Excited(k - 1)
            }
            .label();
            m.serialize_entry(&label, &ReorderedHistogram(hist, self.0.order))?;
        }
        m.end()
    }
}

impl Serialize for ReorderedHistogram<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // Reversal is an involution, so the same mapping converts canonical to LSB.
        let entries: BTreeMap<String, u64> = self.0.iter().map(|(k, &v)| (self.1.to_canonical(k), v)).collect();
        entries.serialize(s)
    }
}

impl CountsTable {
    /// Assembles a table from histograms in [`preparation_set`] order, validating every invariant.
    pub fn new(num_qubits: usize, shots: u64, histograms: Vec<Histogram>) -> Result<Self> {
        let preps = preparation_set(num_qubits)?;
        if shots == 0 {
            return Err(Error::validation("shots must be at least 1"));
        }
        if histograms.len() != preps.len() {
            return Err(Error::validation(format!(
                "expected {} histograms for {num_qubits} qubits, got {}",
                preps.len(),
                histograms.len()
            )));
        }
        for (prep, hist) in preps.iter().zip(&histograms) {
            check_histogram(hist, num_qubits, shots).map_err(|e| Error::validation(format!("{prep}: {e}")))?;
        }
        Ok(CountsTable {
            num_qubits,
            shots,
            histograms,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn histogram(&self, prep: Preparation) -> &Histogram {
        &self.histograms[prep.index()]
    }

    pub fn ground(&self) -> &Histogram {
        self.histogram(Preparation::Ground)
    }

    pub fn excited(&self, k: usize) -> &Histogram {
        self.histogram(Preparation::Excited(k))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Preparation, &Histogram)> {
        std::iter::once(Preparation::Ground)
            .chain((0..self.num_qubits).map(Preparation::Excited))
            .zip(&self.histograms)
    }

    /// Parses a counts file. `bit_order` overrides nothing: when both the caller and
    /// the file state an order they must agree, and at least one must be present.
    pub fn from_json_str(text: &str, bit_order: Option<BitOrder>) -> Result<Self> {
        let file: CountsFileIn = serde_json::from_str(text).map_err(|e| Error::parse("counts", e))?;
        let order = match (bit_order, file.bit_order) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::validation(format!(
                    "bit order conflict: requested {a:?} but the file declares {b:?}"
                )))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Error::validation("counts file has no bit_order; pass one explicitly")),
        };
        let n = file.num_qubits;
        let preps = preparation_set(n)?;
        let mut remaining = file.preparations;
        let mut histograms = Vec::with_capacity(preps.len());
        for prep in &preps {
            let raw = remaining
                .remove(&prep.label())
                .ok_or_else(|| Error::validation(format!("missing preparation {prep}")))?;
            let mut hist = Histogram::new();
            for (key, count) in raw {
                bits::parse_bitstring(&key, n).map_err(|e| Error::validation(format!("{prep}: {e}")))?;
                hist.insert(order.to_canonical(&key), count);
            }
            histograms.push(hist);
        }
        if let Some(extra) = remaining.keys().next() {
            return Err(Error::validation(format!("unknown preparation label \"{extra}\"")));
        }
        CountsTable::new(n, file.shots, histograms)
    }

    pub fn load(path: &Path, bit_order: Option<BitOrder>) -> Result<Self> {
        CountsTable::from_json_str(&io::read_to_string(path)?, bit_order)
    }

    /// Canonical (MSB-first) counts file.
    pub fn to_json_string(&self) -> String {
        self.to_json_string_with_order(BitOrder::Msb)
    }

    pub fn to_json_string_with_order(&self, order: BitOrder) -> String {
        io::to_json_pretty(&CountsFileOut { table: self, order })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hist(entries: &[(&str, u64)]) -> Histogram {
        entries.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn preparation_set_sizes() {
        let p = preparation_set(1).unwrap();
        assert_eq!(p, vec![Preparation::Ground, Preparation::Excited(0)]);
        assert_eq!(preparation_set(15).unwrap().len(), 16);
        assert_eq!(preparation_set(65).unwrap().len(), 66);
        assert!(preparation_set(0).is_err());
        for n in 1..20 {
            let p = preparation_set(n).unwrap();
            assert_eq!(p.iter().filter(|x| **x == Preparation::Ground).count(), 1);
            for prep in &p[1..] {
                assert_eq!(prep.true_state(n).iter().filter(|&&b| b).count(), 1);
            }
        }
        assert_eq!(
            Preparation::Excited(3).true_state(5),
            vec![false, false, false, true, false]
        );
    }

    #[test]
    fn noiseless_protocol() {
        let model = NoiseModel::noiseless(2);
        let t = run_protocol(&SimulatorBackend { model: &model }, 2, 10, 0).unwrap();
        assert_eq!(t.ground(), &hist(&[("00", 10)]));
        assert_eq!(t.excited(0), &hist(&[("10", 10)]));
        assert_eq!(t.excited(1), &hist(&[("01", 10)]));
    }

    #[test]
    fn protocol_is_seeded_and_order_free() {
        let model = NoiseModel::new(
            vec![0.05, 0.1, 0.02],
            vec![0.07, 0.03, 0.1],
            &[(1, 2, 0.04)],
            &[],
            &[(0, 2, 0.05)],
        )
        .unwrap();
        let backend = SimulatorBackend { model: &model };
        let t1 = run_protocol(&backend, 3, 81920, 11).unwrap();
        let t2 = run_protocol(&backend, 3, 81920, 11).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1.iter().count(), 4);
        assert!(t1.iter().all(|(_, h)| bits::total(h) == 81920));
        // executing preparations one at a time, in reverse, reproduces the table
        for prep in preparation_set(3).unwrap().into_iter().rev() {
            let h = backend
                .run(&prep.true_state(3), 81920, 11, prep.index() as u64)
                .unwrap();
            assert_eq!(&h, t1.histogram(prep));
        }
    }

    struct Failing;
    impl Backend for Failing {
        fn run(&self, state: &[bool], shots: u64, _: u64, _: u64) -> Result<Histogram> {
            if state.get(1) == Some(&true) {
                return Err(Error::validation("device offline"));
            }
            Ok(Histogram::from([(bits::to_bitstring(state), shots)]))
        }
    }

    struct Short;
    impl Backend for Short {
        fn run(&self, state: &[bool], shots: u64, _: u64, _: u64) -> Result<Histogram> {
            Ok(Histogram::from([(bits::to_bitstring(state), shots - 1)]))
        }
    }

    #[test]
    fn backend_failures_name_the_preparation() {
        let err = run_protocol(&Failing, 3, 5, 0).unwrap_err().to_string();
        assert!(err.contains("x_1"), "{err}");
        let err = run_protocol(&Short, 2, 5, 0).unwrap_err().to_string();
        assert!(err.contains("count total mismatch"), "{err}");
    }

    fn two_qubit_file(order: &str, x0: &str) -> String {
        format!(
            r#"{{"num_qubits": 2, "shots": 7, "bit_order": "{order}",
                "preparations": {{"ground": {{"00": 7}}, "x_0": {{"{x0}": 7}}, "x_1": {{"01": 3, "10": 4}}}}}}"#
        )
    }

    #[test]
    fn lsb_ingestion_reverses_bitstrings() {
        let t = CountsTable::from_json_str(&two_qubit_file("lsb", "01"), None).unwrap();
        assert_eq!(t.excited(0), &hist(&[("10", 7)]));
        assert_eq!(t.excited(1), &hist(&[("10", 3), ("01", 4)]));
        let t = CountsTable::from_json_str(&two_qubit_file("msb", "10"), Some(BitOrder::Msb)).unwrap();
        assert_eq!(t.excited(0), &hist(&[("10", 7)]));
    }

    #[test]
    fn bit_order_must_be_known_and_consistent() {
        let text = two_qubit_file("lsb", "01");
        assert!(CountsTable::from_json_str(&text, Some(BitOrder::Msb)).is_err());
        let no_order = r#"{"num_qubits": 1, "shots": 1, "preparations": {"ground": {"0": 1}, "x_0": {"1": 1}}}"#;
        assert!(CountsTable::from_json_str(no_order, None).is_err());
        assert!(CountsTable::from_json_str(no_order, Some(BitOrder::Lsb)).is_ok());
    }

    #[test]
    fn missing_preparation_is_named() {
        let mut preps: Vec<String> = vec![r#""ground": {"00000": 1}"#.into()];
        for k in [0, 1, 2, 4] {
            preps.push(format!(r#""x_{k}": {{"00000": 1}}"#));
        }
        let text = format!(
            r#"{{"num_qubits": 5, "shots": 1, "bit_order": "msb", "preparations": {{{}}}}}"#,
            preps.join(",")
        );
        let err = CountsTable::from_json_str(&text, None).unwrap_err().to_string();
        assert!(err.contains("x_3"), "{err}");
    }

    #[test]
    fn count_total_mismatch() {
        let text = r#"{"num_qubits": 1, "shots": 10, "bit_order": "msb",
            "preparations": {"ground": {"0": 9}, "x_0": {"1": 10}}}"#;
        let err = CountsTable::from_json_str(text, None).unwrap_err().to_string();
        assert!(err.contains("count total mismatch"), "{err}");
    }

    #[test]
    fn malformed_bitstring_and_unknown_label() {
        let text = r#"{"num_qubits": 1, "shots": 1, "bit_order": "msb",
            "preparations": {"ground": {"00": 1}, "x_0": {"1": 1}}}"#;
        assert!(CountsTable::from_json_str(text, None)
            .unwrap_err()
            .to_string()
            .contains("malformed"));
        let text = r#"{"num_qubits": 1, "shots": 1, "bit_order": "msb",
            "preparations": {"ground": {"0": 1}, "x_0": {"1": 1}, "x_1": {"1": 1}}}"#;
        assert!(CountsTable::from_json_str(text, None)
            .unwrap_err()
            .to_string()
            .contains("x_1"));
    }

    #[test]
    fn written_labels_follow_preparation_order() {
        let model = NoiseModel::noiseless(11);
        let t = run_protocol(&SimulatorBackend { model: &model }, 11, 1, 0).unwrap();
        let text = t.to_json_string();
        let x2 = text.find("\"x_2\"").unwrap();
        let x10 = text.find("\"x_10\"").unwrap();
        assert!(x2 < x10);
    }

    fn arb_table() -> impl Strategy<Value = CountsTable> {
        (1usize..5, 1u64..50).prop_flat_map(|(n, shots)| {
            let one = proptest::collection::vec((proptest::collection::vec(any::<bool>(), n), 1u64..5), 1..6);
            proptest::collection::vec(one, n + 1).prop_map(move |raw| {
                let histograms = raw
                    .into_iter()
                    .map(|entries| {
                        let mut h = Histogram::new();
                        for (b, c) in entries {
                            *h.entry(bits::to_bitstring(&b)).or_default() += c;
                        }
                        h
                    })
                    .collect::<Vec<_>>();
                // rescale so every histogram totals the same shot count
                let target = histograms.iter().map(bits::total).max().unwrap() + shots;
                let histograms = histograms
                    .into_iter()
                    .map(|mut h| {
                        let missing = target - bits::total(&h);
                        *h.entry("0".repeat(n)).or_default() += missing;
                        h
                    })
                    .collect();
                CountsTable::new(n, target, histograms).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn write_then_ingest_is_identity(t in arb_table()) {
            prop_assert_eq!(&CountsTable::from_json_str(&t.to_json_string(), None).unwrap(), &t);
            let lsb = t.to_json_string_with_order(BitOrder::Lsb);
            prop_assert_eq!(&CountsTable::from_json_str(&lsb, Some(BitOrder::Lsb)).unwrap(), &t);
        }
    }
}
