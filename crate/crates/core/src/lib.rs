//! Characterization of correlated qubit readout errors.
//!
//! The pipeline prepares the ground state and every single-excitation state,
//! collects readout histograms ([`protocol`]), estimates per-qubit errors and
//! two-qubit correlators ([`estimators`]), and summarizes them against the
//! device coupling graph ([`topology`], [`analysis`]). A correlated-noise
//! simulator with an exact enumeration oracle ([`noise_model`]) provides ground
//! truth for every estimator.

pub mod analysis;
pub mod bits;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod io;
pub mod noise_model;
pub mod protocol;
pub mod topology;

pub use analysis::{analyze, AnalysisConfig, DistanceSummary, Summary};
pub use bits::Histogram;
pub use error::{Error, ErrorKind, Result};
pub use estimators::{characterize, sampling_bounds, CorrelatorMatrix, CorrelatorSet, SamplingBounds};
pub use noise_model::{ExactDistribution, NoiseModel, DEFAULT_MAX_ENUM};
pub use protocol::{preparation_set, run_protocol, BitOrder, CountsTable, Preparation, SimulatorBackend};
pub use topology::{DistanceMatrix, Topology};
