//! Bitstrings and outcome histograms.
//!
//! Canonical order: character `k` of a bitstring is qubit `k`, so the leftmost
//! character is qubit 0.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Outcome counts keyed by canonical bitstring. Ordered so serialization is deterministic.
pub type Histogram = BTreeMap<String, u64>;

pub fn to_bitstring(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bitstring(s: &str, n: usize) -> Result<Vec<bool>> {
    if s.len() != n {
        return Err(Error::validation(format!(
            "malformed bitstring \"{s}\": expected length {n}, got {}",
            s.len()
        )));
    }
    s.bytes()
        .map(|c| match c {
            b'0' => Ok(false),
            b'1' => Ok(true),
            _ => Err(Error::validation(format!(
                "malformed bitstring \"{s}\": only 0/1 allowed"
            ))),
        })
        .collect()
}

/// Basis state with only qubit `k` set.
pub fn one_hot(n: usize, k: usize) -> Vec<bool> {
    let mut v = vec![false; n];
    v[k] = true;
    v
}

pub fn total(hist: &Histogram) -> u64 {
    hist.values().sum()
}
