//! Plot-ready summaries: correlator histograms, distance-binned quartiles of
//! `|A_ij|`, noise-floor flags and full matrix dumps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{CorrelatorMatrix, CorrelatorSet};
use crate::io;
use crate::topology::DistanceMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramResult {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Values below the first edge. Not folded into the first bin.
    pub underflow: u64,
    /// Values at or above the last edge.
    pub overflow: u64,
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::validation("histogram needs at least 2 edges"));
    }
    if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation(
            "histogram edges must be finite and strictly increasing",
        ));
    }
    Ok(())
}

/// Bin `k` holds `edges[k] <= v < edges[k+1]`.
pub fn histogram(values: &[f64], edges: &[f64]) -> Result<HistogramResult> {
    check_edges(edges)?;
    let mut out = HistogramResult {
        edges: edges.to_vec(),
        counts: vec![0; edges.len() - 1],
        underflow: 0,
        overflow: 0,
    };
    let last = edges[edges.len() - 1];
    for &v in values {
        if v.is_nan() {
            return Err(Error::validation("cannot histogram NaN"));
        }
        if v < edges[0] {
            out.underflow += 1;
        } else if v >= last {
            out.overflow += 1;
        } else {
            // first edge strictly greater than v, minus one
            let k = edges.partition_point(|&e| e <= v) - 1;
            out.counts[k] += 1;
        }
    }
    Ok(out)
}

/// 20 logarithmically spaced bins over `[1e-5, 1]`.
pub fn default_edges() -> Vec<f64> {
    (0..=20).map(|k| 10f64.powf(-5.0 + 0.25 * k as f64)).collect()
}

/// Mirror of non-negative `edges` onto the negative axis, for signed values.
/// The central bin is `[-edges[0], edges[0])`, or absent when `edges[0]` is 0.
pub fn signed_edges(edges: &[f64]) -> Vec<f64> {
    let skip = usize::from(edges.first() == Some(&0.0));
    edges[skip..]
        .iter()
        .rev()
        .map(|e| -e)
        .chain(edges.iter().copied())
        .collect()
}

/// Linear interpolation between closest ranks: `h = (m-1)p + 1` (1-based),
/// `Q(p) = x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h])`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    match sorted.get(lo + 1) {
        Some(&hi) if frac > 0.0 => sorted[lo] + frac * (hi - sorted[lo]),
        _ => sorted[lo],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl FiveNumber {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(FiveNumber {
            min: v[0],
            q1: quantile_sorted(&v, 0.25),
            median: quantile_sorted(&v, 0.5),
            q3: quantile_sorted(&v, 0.75),
            max: v[v.len() - 1],
        })
    }
}

/// Statistics for one hop count. `stats` is `None` when no pair sits at this distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceBin {
    pub distance: u32,
    pub count: usize,
    #[serde(flatten)]
    pub stats: Option<FiveNumber>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSummary {
    /// One entry for every distance from 1 to the graph diameter.
    pub bins: Vec<DistanceBin>,
    /// Ordered off-diagonal pairs skipped because they are disconnected.
    pub unreachable_pairs: usize,
    /// Off-diagonal pairs skipped because their entry is masked.
    pub masked_pairs: usize,
}

impl DistanceSummary {
    pub fn bin(&self, distance: u32) -> Option<&DistanceBin> {
        self.bins.iter().find(|b| b.distance == distance)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["distance", "count", "min", "q1", "median", "q3", "max"])
            .expect("in-memory csv");
        for b in &self.bins {
            let mut rec = vec![b.distance.to_string(), b.count.to_string()];
            match b.stats {
                Some(s) => rec.extend([s.min, s.q1, s.median, s.q3, s.max].iter().map(f64::to_string)),
                None => rec.extend(std::iter::repeat_n(String::new(), 5)),
            }
            w.write_record(&rec).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
    }
}

fn check_dims(what: &str, a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::validation(format!(
            "num_qubits mismatch: {what} has {a} qubits, topology has {b}"
        )));
    }
    Ok(())
}

/// Groups `|M_ij|` by minimum connected distance over ordered pairs `i != j`.
/// Both `(i, j)` and `(j, i)` contribute, since `A` is not symmetric.
pub fn bin_by_distance(matrix: &CorrelatorMatrix, distances: &DistanceMatrix) -> Result<DistanceSummary> {
    let n = matrix.num_qubits();
    check_dims("correlator matrix", n, distances.num_qubits())?;
    let mut groups: BTreeMap<u32, Vec<f64>> = (1..=distances.diameter()).map(|d| (d, Vec::new())).collect();
    let (mut unreachable, mut masked) = (0, 0);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match (matrix.get(i, j), distances.get(i, j)) {
                (_, None) => unreachable += 1,
                (None, _) => masked += 1,
                (Some(v), Some(d)) => groups.entry(d).or_default().push(v.abs()),
            }
        }
    }
    Ok(DistanceSummary {
        bins: groups
            .into_iter()
            .map(|(distance, vals)| DistanceBin {
                distance,
                count: vals.len(),
                stats: FiveNumber::of(&vals),
            })
            .collect(),
        unreachable_pairs: unreachable,
        masked_pairs: masked,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FloorFlag {
    AboveFloor,
    BelowFloor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloorFlags {
    pub multiplier: f64,
    pub a_floor: f64,
    pub c_floor: f64,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Option<FloorFlag>>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<Option<FloorFlag>>>,
}

fn flag(value: f64, floor: f64) -> FloorFlag {
    if value.abs() > floor {
        FloorFlag::AboveFloor
    } else {
        FloorFlag::BelowFloor
    }
}

/// `|A_ij|` is compared to `k/sqrt(2N)` and `|C_ij|` to `k/(2 sqrt N)`; a value exactly
/// at the floor is below it. Exact correlators carry no bounds and use a floor of zero.
pub fn noise_floor_classification(corr: &CorrelatorSet, multiplier: f64) -> FloorFlags {
    let (a_floor, c_floor) = match corr.bounds {
        Some(b) => (multiplier * b.eps_or_a, multiplier * b.c),
        None => (0.0, 0.0),
    };
    let classify = |m: &CorrelatorMatrix, floor: f64| {
        m.rows()
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.map(|x| flag(x, floor))).collect())
            .collect()
    };
    FloorFlags {
        multiplier,
        a_floor,
        c_floor,
        a: classify(&corr.a, a_floor),
        c: classify(&corr.c, c_floor),
    }
}

/// Aligned `A` and distance tables for heat maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixReport {
    #[serde(rename = "A")]
    pub a: CorrelatorMatrix,
    pub distances: DistanceMatrix,
}

pub fn matrix_report(corr: &CorrelatorSet, distances: &DistanceMatrix) -> Result<MatrixReport> {
    check_dims("correlator set", corr.num_qubits, distances.num_qubits())?;
    Ok(MatrixReport {
        a: corr.a.clone(),
        distances: distances.clone(),
    })
}

impl MatrixReport {
    pub fn a_csv(&self) -> String {
        self.a.to_csv()
    }

    /// Unreachable pairs are empty cells.
    pub fn distance_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for row in self.distances.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|d| d.map(|v| v.to_string()).unwrap_or_default())
                .collect();
            w.write_record(&cells).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
    }

    pub fn from_csv(a_csv: &str, distance_csv: &str) -> Result<Self> {
        let a = CorrelatorMatrix::from_csv(a_csv)?;
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(distance_csv.as_bytes());
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|c| {
                    if c.is_empty() {
                        Ok(None)
                    } else {
                        c.parse::<u32>()
                            .map(Some)
                            .map_err(|_| Error::validation(format!("csv: \"{c}\" is not a distance")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let distances = DistanceMatrix::from_rows(rows)?;
        check_dims("A table", a.num_qubits(), distances.num_qubits())?;
        Ok(MatrixReport { a, distances })
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    /// Edges for histograms of absolute values; signed histograms use [`signed_edges`].
    pub edges: Vec<f64>,
    pub floor_multiplier: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            edges: default_edges(),
            floor_multiplier: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub num_qubits: usize,
    /// Keys: `epsilon`, `abs_A`, `abs_C` (absolute values) and `A`, `C` (signed).
    pub histograms: BTreeMap<String, HistogramResult>,
    /// `|A_ij|` by distance.
    pub distance_summary: DistanceSummary,
    /// `|C_ij|` by distance.
    #[serde(rename = "distance_summary_C")]
    pub distance_summary_c: DistanceSummary,
    pub floor_flags: FloorFlags,
    pub matrix_report: MatrixReport,
}

pub fn analyze(corr: &CorrelatorSet, distances: &DistanceMatrix, config: &AnalysisConfig) -> Result<Summary> {
    check_dims("correlator set", corr.num_qubits, distances.num_qubits())?;
    if !(config.floor_multiplier.is_finite() && config.floor_multiplier >= 0.0) {
        return Err(Error::validation("floor multiplier must be a non-negative number"));
    }
    check_edges(&config.edges)?;
    if config.edges[0] < 0.0 {
        return Err(Error::validation(
            "histogram edges apply to absolute values and must be non-negative",
        ));
    }
    let signed = signed_edges(&config.edges);
    let abs = |v: Vec<f64>| v.into_iter().map(f64::abs).collect::<Vec<_>>();
    let a_vals: Vec<f64> = corr.a.off_diagonal().collect();
    let c_vals: Vec<f64> = corr.c.off_diagonal().collect();
    let mut histograms = BTreeMap::new();
    histograms.insert(
        "epsilon".to_string(),
        histogram(&abs(corr.epsilon.clone()), &config.edges)?,
    );
    histograms.insert("abs_A".to_string(), histogram(&abs(a_vals.clone()), &config.edges)?);
    histograms.insert("abs_C".to_string(), histogram(&abs(c_vals.clone()), &config.edges)?);
    histograms.insert("A".to_string(), histogram(&a_vals, &signed)?);
    histograms.insert("C".to_string(), histogram(&c_vals, &signed)?);
    Ok(Summary {
        num_qubits: corr.num_qubits,
        histograms,
        distance_summary: bin_by_distance(&corr.a, distances)?,
        distance_summary_c: bin_by_distance(&corr.c, distances)?,
        floor_flags: noise_floor_classification(corr, config.floor_multiplier),
        matrix_report: matrix_report(corr, distances)?,
    })
}

impl Summary {
    pub fn to_json_string(&self) -> String {
        io::to_json_pretty(self)
    }

    /// One row per bin, with underflow and overflow rows per quantity.
    pub fn histograms_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["quantity", "kind", "lower", "upper", "count"])
            .expect("in-memory csv");
        for (name, h) in &self.histograms {
            let first = h.edges[0].to_string();
            let last = h.edges[h.edges.len() - 1].to_string();
            w.write_record([name.as_str(), "underflow", "", &first, &h.underflow.to_string()])
                .expect("in-memory csv");
            for (k, c) in h.counts.iter().enumerate() {
                w.write_record([
                    name.as_str(),
                    "bin",
                    &h.edges[k].to_string(),
                    &h.edges[k + 1].to_string(),
                    &c.to_string(),
                ])
                .expect("in-memory csv");
            }
            w.write_record([name.as_str(), "overflow", &last, "", &h.overflow.to_string()])
                .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::sampling_bounds;
    use crate::topology::Topology;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn set_with(n: usize, shots: Option<u64>, a: f64, c: f64) -> CorrelatorSet {
        CorrelatorSet {
            num_qubits: n,
            exact: shots.is_none(),
            shots,
            epsilon: vec![0.0; n],
            a: CorrelatorMatrix::from_fn(n, |_, _| a),
            c: CorrelatorMatrix::symmetric_from_fn(n, |_, _| c),
            bounds: shots.map(|s| sampling_bounds(s).unwrap()),
        }
    }

    #[test]
    fn histogram_single_bin() {
        let h = histogram(&[0.5], &[0.0, 1.0]).unwrap();
        assert_eq!(h.counts, vec![1]);
    }

    #[test]
    fn histogram_underflow_excluded() {
        let h = histogram(&[-0.1], &[0.0, 1.0]).unwrap();
        assert_eq!((h.counts.clone(), h.underflow, h.overflow), (vec![0], 1, 0));
    }

    #[test]
    fn histogram_half_open() {
        let h = histogram(&[0.0, 0.999, 1.0], &[0.0, 1.0]).unwrap();
        assert_eq!((h.counts.clone(), h.overflow), (vec![2], 1));
        let h = histogram(&[0.5, 1.0, 1.5], &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(h.counts, vec![1, 2]);
    }

    #[test]
    fn histogram_bad_edges() {
        assert!(histogram(&[0.1], &[0.0]).is_err());
        assert!(histogram(&[0.1], &[0.0, 0.0]).is_err());
        assert!(histogram(&[0.1], &[1.0, 0.0]).is_err());
        assert!(histogram(&[f64::NAN], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn default_edges_span() {
        let e = default_edges();
        assert_eq!(e.len(), 21);
        assert_abs_diff_eq!(e[0], 1e-5, epsilon = 1e-20);
        assert_eq!(e[20], 1.0);
        assert!(e.windows(2).all(|w| w[0] < w[1]));
        let s = signed_edges(&e);
        assert_eq!(s.len(), 42);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(signed_edges(&[0.0, 0.5, 1.0]), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn quartiles_linear_rule() {
        let f = FiveNumber::of(&[0.04, 0.01, 0.03, 0.02]).unwrap();
        assert_abs_diff_eq!(f.min, 0.01);
        assert_abs_diff_eq!(f.q1, 0.0175, epsilon = 1e-15);
        assert_abs_diff_eq!(f.median, 0.025, epsilon = 1e-15);
        assert_abs_diff_eq!(f.q3, 0.0325, epsilon = 1e-15);
        assert_abs_diff_eq!(f.max, 0.04);
        assert_eq!(FiveNumber::of(&[7.0]).unwrap().q3, 7.0);
        assert!(FiveNumber::of(&[]).is_none());
    }

    #[test]
    fn zero_matrix_zero_stats() {
        let d = Topology::path(3).unwrap().min_distances();
        let s = bin_by_distance(&CorrelatorMatrix::from_fn(3, |_, _| 0.0), &d).unwrap();
        assert_eq!(s.bins.len(), 2);
        assert_eq!(s.bin(1).unwrap().count, 4);
        assert_eq!(s.bin(2).unwrap().count, 2);
        for b in &s.bins {
            let st = b.stats.unwrap();
            assert_eq!([st.min, st.q1, st.median, st.q3, st.max], [0.0; 5]);
        }
    }

    #[test]
    fn empty_and_unreachable_bins() {
        // 0-1 connected, 2 isolated; 3 and 4 joined through 5 at distance 2 only
        let t = Topology::new(6, &[(0, 1), (3, 5), (5, 4)]).unwrap();
        let d = t.min_distances();
        let m = CorrelatorMatrix::from_fn(6, |i, j| (i + j) as f64);
        let s = bin_by_distance(&m, &d).unwrap();
        assert_eq!(s.bins.iter().map(|b| b.count).sum::<usize>() + s.unreachable_pairs, 30);
        let t2 = Topology::new(4, &[(0, 1), (2, 3)]).unwrap();
        let s2 = bin_by_distance(&CorrelatorMatrix::from_fn(4, |_, _| 1.0), &t2.min_distances()).unwrap();
        assert_eq!(s2.unreachable_pairs, 8);
        assert_eq!(s2.bins.len(), 1);
        // every distance-2 entry masked: the bin is present but carries no statistics
        let d3 = Topology::path(3).unwrap().min_distances();
        let m3 = CorrelatorMatrix::from_rows(vec![
            vec![None, Some(0.1), None],
            vec![Some(0.2), None, Some(0.3)],
            vec![None, Some(0.4), None],
        ])
        .unwrap();
        let s3 = bin_by_distance(&m3, &d3).unwrap();
        assert_eq!(s3.masked_pairs, 2);
        let empty = s3.bin(2).unwrap();
        assert_eq!((empty.count, empty.stats), (0, None));
        assert_eq!(serde_json::to_string(empty).unwrap(), r#"{"distance":2,"count":0}"#);
    }

    #[test]
    fn dimension_mismatch() {
        let d = Topology::path(3).unwrap().min_distances();
        let err = bin_by_distance(&CorrelatorMatrix::from_fn(2, |_, _| 0.0), &d).unwrap_err();
        assert!(err.to_string().contains("num_qubits mismatch"));
        assert!(matrix_report(&set_with(2, Some(10), 0.0, 0.0), &d).is_err());
    }

    #[test]
    fn floor_flags_at_reference_shots() {
        let above = noise_floor_classification(&set_with(2, Some(81920), 0.01, 0.0), 1.0);
        assert_eq!(above.a[0][1], Some(FloorFlag::AboveFloor));
        assert_eq!(above.a[0][0], None);
        assert_eq!(above.c[0][1], Some(FloorFlag::BelowFloor));
        let below = noise_floor_classification(&set_with(2, Some(819200), 5e-4, 0.0), 1.0);
        assert_eq!(below.a[1][0], Some(FloorFlag::BelowFloor));
        let floor = sampling_bounds(819200).unwrap().eps_or_a;
        let at = noise_floor_classification(&set_with(2, Some(819200), floor, 0.0), 1.0);
        assert_eq!(at.a[1][0], Some(FloorFlag::BelowFloor));
        let at_neg = noise_floor_classification(&set_with(2, Some(819200), -floor * 1.01, 0.0), 1.0);
        assert_eq!(at_neg.a[1][0], Some(FloorFlag::AboveFloor));
        let k3 = noise_floor_classification(&set_with(2, Some(81920), 0.005, 0.0), 3.0);
        assert_eq!(k3.a[0][1], Some(FloorFlag::BelowFloor));
    }

    #[test]
    fn matrix_report_tables() {
        let d = Topology::path(3).unwrap().min_distances();
        let r = matrix_report(&set_with(3, Some(100), 0.25, 0.0), &d).unwrap();
        assert_eq!(r.distance_csv(), "0,1,2\n1,0,1\n2,1,0\n");
        assert_eq!(r.a_csv(), ",0.25,0.25\n0.25,,0.25\n0.25,0.25,\n");
        let back = MatrixReport::from_csv(&r.a_csv(), &r.distance_csv()).unwrap();
        assert_eq!(back, r);
        let r2 = matrix_report(
            &set_with(2, Some(100), 0.0, 0.0),
            &Topology::new(2, &[]).unwrap().min_distances(),
        )
        .unwrap();
        assert_eq!(r2.distance_csv(), "0,\n,0\n");
        assert_eq!(MatrixReport::from_csv(&r2.a_csv(), &r2.distance_csv()).unwrap(), r2);
    }

    #[test]
    fn analyze_path_zero() {
        let d = Topology::path(3).unwrap().min_distances();
        let s = analyze(&set_with(3, Some(1000), 0.0, 0.0), &d, &AnalysisConfig::default()).unwrap();
        assert_eq!(s.distance_summary.bins.len(), 2);
        assert_eq!(s.histograms["abs_A"].underflow, 6);
        assert_eq!(s.histograms["A"].counts.iter().sum::<u64>(), 6);
        let json = s.to_json_string();
        assert!(json.contains("\"distance_summary\""));
        assert!(json.contains("\"floor_flags\""));
        let back: Summary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(s.histograms_csv().lines().count() > 5);
    }

    proptest! {
        #[test]
        fn histogram_conserves(values in proptest::collection::vec(-2.0f64..2.0, 0..200),
                               mut edges in proptest::collection::btree_set(-1000i32..1000, 2..20)) {
            let edges: Vec<f64> = std::mem::take(&mut edges).into_iter().map(|e| e as f64 / 500.0).collect();
            let h = histogram(&values, &edges).unwrap();
            prop_assert_eq!(h.counts.iter().sum::<u64>() + h.underflow + h.overflow, values.len() as u64);
        }

        #[test]
        fn quartiles_ordered(values in proptest::collection::vec(-1.0f64..1.0, 1..50)) {
            let f = FiveNumber::of(&values).unwrap();
            prop_assert!(f.min <= f.q1 && f.q1 <= f.median && f.median <= f.q3 && f.q3 <= f.max);
        }

        #[test]
        fn constant_matrix_constant_stats(n in 2usize..9, c in -0.5f64..0.5) {
            let d = Topology::path(n).unwrap().min_distances();
            let s = bin_by_distance(&CorrelatorMatrix::from_fn(n, |_, _| c), &d).unwrap();
            prop_assert_eq!(s.bins.iter().map(|b| b.count).sum::<usize>(), n * (n - 1));
            for b in &s.bins {
                let st = b.stats.unwrap();
                for v in [st.min, st.q1, st.median, st.q3, st.max] {
                    prop_assert_eq!(v, c.abs());
                }
            }
        }

        #[test]
        fn floor_flags_monotone(v in 0.0f64..0.01, bump in 0.0f64..0.01, shots in 1u64..1_000_000) {
            let lo = noise_floor_classification(&set_with(2, Some(shots), v, v), 1.0);
            let hi = noise_floor_classification(&set_with(2, Some(shots), v + bump, v + bump), 1.0);
            if lo.a[0][1] == Some(FloorFlag::AboveFloor) {
                prop_assert_eq!(hi.a[0][1], Some(FloorFlag::AboveFloor));
            }
            if lo.c[0][1] == Some(FloorFlag::AboveFloor) {
                prop_assert_eq!(hi.c[0][1], Some(FloorFlag::AboveFloor));
            }
        }
    }
}
