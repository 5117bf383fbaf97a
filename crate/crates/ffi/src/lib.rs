//! C ABI over `spamcorr`.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json` or by an
//! operation, and released with the matching `*_free`. Every fallible function
//! returns a [`SpamcorrStatus`]; on failure the message is available from
//! [`spamcorr_last_error_message`] on the same thread. Strings returned through
//! `char **` out-parameters are owned by the caller and released with
//! [`spamcorr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spamcorr::analysis::{analyze, default_edges, AnalysisConfig};
use spamcorr::estimators::{characterize, sampling_bounds, CorrelatorSet};
use spamcorr::protocol::{run_protocol, BitOrder, CountsTable, SimulatorBackend};
use spamcorr::{DistanceMatrix, ErrorKind, NoiseModel, Topology};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpamcorrStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input was rejected: malformed JSON, bad probabilities, inconsistent tables.
    Validation = 3,
    /// The operation could not complete, for example the enumeration guard tripped.
    Runtime = 4,
    /// A qubit index was not below the number of qubits.
    OutOfRange = 5,
    /// The requested matrix entry is on the masked diagonal.
    Masked = 6,
    /// The value does not exist for this object, such as bounds of an exact set.
    Unavailable = 7,
    /// A Rust panic was caught at the boundary.
    Panic = 8,
}

/// Bit order of counts JSON. `Auto` takes the order from the document's own field.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpamcorrBitOrder {
    Auto = 0,
    Msb = 1,
    Lsb = 2,
}

/// Worst-case standard errors at a given number of shots.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpamcorrSamplingBounds {
    pub single_prob: f64,
    pub eps_or_a: f64,
    pub c: f64,
    pub global: f64,
}

/// Readout noise model.
pub struct SpamcorrModel(NoiseModel);
/// Coupling graph.
pub struct SpamcorrTopology(Topology);
/// All-pairs shortest-path distances of a topology.
pub struct SpamcorrDistances(DistanceMatrix);
/// Counts for the ground and single-excitation preparations.
pub struct SpamcorrCounts(CountsTable);
/// Estimated or exact epsilon, A and C.
pub struct SpamcorrCorrelators(CorrelatorSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SpamcorrStatus, String);

impl From<spamcorr::Error> for Failure {
    fn from(e: spamcorr::Error) -> Self {
        let status = match e.kind() {
            ErrorKind::Validation => SpamcorrStatus::Validation,
            ErrorKind::Runtime => SpamcorrStatus::Runtime,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SpamcorrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            SpamcorrStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            SpamcorrStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(SpamcorrStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(SpamcorrStatus::NullPointer, format!("{name} is null")))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(SpamcorrStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(SpamcorrStatus::InvalidUtf8, format!("{name}: {e}")))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(SpamcorrStatus::Runtime, "output contains a NUL byte".to_string()))
}

fn check_index(i: usize, n: usize) -> Result<(), Failure> {
    if i >= n {
        return Err(Failure(
            SpamcorrStatus::OutOfRange,
            format!("qubit index {i} out of range for {n} qubits"),
        ));
    }
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or null after a successful call.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn spamcorr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string produced by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Fills `out` with the sampling bounds for `shots` (must be positive).
///
/// # Safety
/// `out` must be null or point to writable memory for one `SpamcorrSamplingBounds`.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_sampling_bounds(shots: u64, out: *mut SpamcorrSamplingBounds) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let b = sampling_bounds(shots)?;
        *out = SpamcorrSamplingBounds {
            single_prob: b.single_prob,
            eps_or_a: b.eps_or_a,
            c: b.c,
            global: b.global,
        };
        Ok(())
    })
}

// ---------------------------------------------------------------- noise model

/// Parses a noise-model JSON document.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_model_from_json(json: *const c_char, out: *mut *mut SpamcorrModel) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let model = NoiseModel::from_json_str(read_str(json, "json")?)?;
        *out = boxed(SpamcorrModel(model));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_model_free(model: *mut SpamcorrModel) {
    free(model)
}

/// # Safety
/// `model` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_model_num_qubits(model: *const SpamcorrModel, out: *mut usize) -> SpamcorrStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(model, "model")?.0.num_qubits();
        Ok(())
    })
}

/// Samples `shots` readouts of every preparation. Identical arguments give identical counts.
///
/// # Safety
/// `model` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_model_simulate(
    model: *const SpamcorrModel,
    shots: u64,
    seed: u64,
    out: *mut *mut SpamcorrCounts,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let model = &deref(model, "model")?.0;
        if shots == 0 {
            return Err(Failure(
                SpamcorrStatus::Validation,
                "shots must be positive".to_string(),
            ));
        }
        let table = run_protocol(&SimulatorBackend { model }, model.num_qubits(), shots, seed)?;
        *out = boxed(SpamcorrCounts(table));
        Ok(())
    })
}

/// Exact infinite-shot correlators. Fails with `Runtime` when the enumeration
/// size exceeds `max_enum` (pass 0 for the default of 2^24).
///
/// # Safety
/// `model` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_model_exact_correlators(
    model: *const SpamcorrModel,
    max_enum: u64,
    out: *mut *mut SpamcorrCorrelators,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let limit = if max_enum == 0 {
            spamcorr::DEFAULT_MAX_ENUM
        } else {
            u128::from(max_enum)
        };
        let set = deref(model, "model")?.0.exact_correlators(limit)?;
        *out = boxed(SpamcorrCorrelators(set));
        Ok(())
    })
}

// ---------------------------------------------------------------- counts

fn bit_order(order: SpamcorrBitOrder) -> Option<BitOrder> {
    match order {
        SpamcorrBitOrder::Auto => None,
        SpamcorrBitOrder::Msb => Some(BitOrder::Msb),
        SpamcorrBitOrder::Lsb => Some(BitOrder::Lsb),
    }
}

/// Parses a counts JSON document. With `Auto` the document must state its `bit_order`;
/// otherwise a stated order must agree with `order`.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_counts_from_json(
    json: *const c_char,
    order: SpamcorrBitOrder,
    out: *mut *mut SpamcorrCounts,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let table = CountsTable::from_json_str(read_str(json, "json")?, bit_order(order))?;
        *out = boxed(SpamcorrCounts(table));
        Ok(())
    })
}

/// Serializes counts. `Auto` writes the canonical `msb` order.
///
/// # Safety
/// `counts` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_counts_to_json(
    counts: *const SpamcorrCounts,
    order: SpamcorrBitOrder,
    out: *mut *mut c_char,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let table = &deref(counts, "counts")?.0;
        *out = into_c_string(table.to_json_string_with_order(bit_order(order).unwrap_or(BitOrder::Msb)))?;
        Ok(())
    })
}

/// # Safety
/// `counts` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_counts_shots(counts: *const SpamcorrCounts, out: *mut u64) -> SpamcorrStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(counts, "counts")?.0.shots();
        Ok(())
    })
}

/// # Safety
/// `counts` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_counts_free(counts: *mut SpamcorrCounts) {
    free(counts)
}

/// Estimates epsilon, A and C with their sampling bounds.
///
/// # Safety
/// `counts` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_characterize(
    counts: *const SpamcorrCounts,
    out: *mut *mut SpamcorrCorrelators,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let set = characterize(&deref(counts, "counts")?.0)?;
        *out = boxed(SpamcorrCorrelators(set));
        Ok(())
    })
}

// ---------------------------------------------------------------- correlators

/// Parses a correlator JSON document as written by `characterize` or `oracle`.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_correlators_from_json(
    json: *const c_char,
    out: *mut *mut SpamcorrCorrelators,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let set = CorrelatorSet::from_json_str(read_str(json, "json")?)?;
        *out = boxed(SpamcorrCorrelators(set));
        Ok(())
    })
}

/// # Safety
/// `corr` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_correlators_to_json(
    corr: *const SpamcorrCorrelators,
    out: *mut *mut c_char,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = into_c_string(deref(corr, "correlators")?.0.to_json_string())?;
        Ok(())
    })
}

/// # Safety
/// `corr` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_correlators_free(corr: *mut SpamcorrCorrelators) {
    free(corr)
}

/// # Safety
/// `corr` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_correlators_num_qubits(
    corr: *const SpamcorrCorrelators,
    out: *mut usize,
) -> SpamcorrStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(corr, "correlators")?.0.num_qubits;
        Ok(())
    })
}

/// Average assignment error of qubit `i`.
///
/// # Safety
/// `corr` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_correlators_epsilon(
    corr: *const SpamcorrCorrelators,
    i: usize,
    out: *mut f64,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let set = &deref(corr, "correlators")?.0;
        check_index(i, set.num_qubits)?;
        *out = set.epsilon[i];
        Ok(())
    })
}

unsafe fn matrix_entry(
    corr: *const SpamcorrCorrelators,
    i: usize,
    j: usize,
    out: *mut f64,
    pick: fn(&CorrelatorSet) -> &spamcorr::CorrelatorMatrix,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let set = &deref(corr, "correlators")?.0;
        check_index(i, set.num_qubits)?;
        check_index(j, set.num_qubits)?;
        match pick(set).get(i, j) {
            Some(v) => *out = v,
            None => {
                return Err(Failure(
                    SpamcorrStatus::Masked,
                    format!("entry ({i},{j}) is on the masked diagonal"),
                ))
            }
        }
        Ok(())
    })
}

/// Excitation correlator `A_ij`: change of qubit `i`'s false-1 rate when qubit `j` is excited.
/// Returns `Masked` for `i == j`.
///
/// # Safety
/// `corr` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_correlators_a(
    corr: *const SpamcorrCorrelators,
    i: usize,
    j: usize,
    out: *mut f64,
) -> SpamcorrStatus {
    matrix_entry(corr, i, j, out, |s| &s.a)
}

/// Ground-state covariance `C_ij` of the zero outcomes. Returns `Masked` for `i == j`.
///
/// # Safety
/// `corr` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_correlators_c(
    corr: *const SpamcorrCorrelators,
    i: usize,
    j: usize,
    out: *mut f64,
) -> SpamcorrStatus {
    matrix_entry(corr, i, j, out, |s| &s.c)
}

/// Sampling bounds attached to an estimated set. Exact sets have none and return `Unavailable`.
///
/// # Safety
/// `corr` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_correlators_bounds(
    corr: *const SpamcorrCorrelators,
    out: *mut SpamcorrSamplingBounds,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let b = deref(corr, "correlators")?.0.bounds.ok_or_else(|| {
            Failure(
                SpamcorrStatus::Unavailable,
                "exact correlators carry no sampling bounds".to_string(),
            )
        })?;
        *out = SpamcorrSamplingBounds {
            single_prob: b.single_prob,
            eps_or_a: b.eps_or_a,
            c: b.c,
            global: b.global,
        };
        Ok(())
    })
}

// ---------------------------------------------------------------- topology

/// Parses a topology JSON document `{"num_qubits": n, "edges": [[i, j], ...]}`.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_topology_from_json(
    json: *const c_char,
    out: *mut *mut SpamcorrTopology,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let topo = Topology::from_json_str(read_str(json, "json")?)?;
        *out = boxed(SpamcorrTopology(topo));
        Ok(())
    })
}

/// # Safety
/// `topo` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_topology_free(topo: *mut SpamcorrTopology) {
    free(topo)
}

/// All-pairs shortest-path distances.
///
/// # Safety
/// `topo` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_topology_distances(
    topo: *const SpamcorrTopology,
    out: *mut *mut SpamcorrDistances,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(SpamcorrDistances(deref(topo, "topology")?.0.min_distances()));
        Ok(())
    })
}

/// # Safety
/// `dist` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_distances_free(dist: *mut SpamcorrDistances) {
    free(dist)
}

/// Distance between qubits `i` and `j`. For disconnected pairs `reachable` is set
/// to false and `out` to 0.
///
/// # Safety
/// `dist` must be a live handle or null; `out` and `reachable` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_distances_get(
    dist: *const SpamcorrDistances,
    i: usize,
    j: usize,
    out: *mut u32,
    reachable: *mut bool,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let reachable = out_ptr(reachable, "reachable")?;
        let d = &deref(dist, "distances")?.0;
        check_index(i, d.num_qubits())?;
        check_index(j, d.num_qubits())?;
        let value = d.get(i, j);
        *reachable = value.is_some();
        *out = value.unwrap_or(0);
        Ok(())
    })
}

// ---------------------------------------------------------------- analysis

/// Runs the full analysis and returns the summary JSON. `edges` may be null to use
/// the default log-spaced edges; otherwise it holds `num_edges` increasing,
/// non-negative values.
///
/// # Safety
/// `corr` and `dist` must be live handles or null; `edges` must be null or point to
/// `num_edges` readable doubles; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn spamcorr_analyze(
    corr: *const SpamcorrCorrelators,
    dist: *const SpamcorrDistances,
    edges: *const f64,
    num_edges: usize,
    floor_multiplier: f64,
    out: *mut *mut c_char,
) -> SpamcorrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let corr = &deref(corr, "correlators")?.0;
        let dist = &deref(dist, "distances")?.0;
        let edges = if edges.is_null() {
            default_edges()
        } else {
            std::slice::from_raw_parts(edges, num_edges).to_vec()
        };
        let config = AnalysisConfig {
            edges,
            floor_multiplier,
        };
        *out = into_c_string(analyze(corr, dist, &config)?.to_json_string())?;
        Ok(())
    })
}
