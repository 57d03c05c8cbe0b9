use thiserror::Error;

use crate::csit::{slot_alphabet, CsitPattern};
use crate::scheme::SchemeId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("unknown slot state `{0}`; valid states are {alphabet}", alphabet = slot_alphabet())]
    SlotState(String),
    #[error("pattern `{0}` must have exactly three comma-separated slot states from {alphabet}", alphabet = slot_alphabet())]
    PatternArity(String),
    #[error("unknown scheme `{0}`")]
    Scheme(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("channel floor eps must satisfy 0 < eps < 1, got {0}")]
    InvalidFloor(f64),
    #[error("noise power must be finite and non-negative, got {0}")]
    InvalidNoisePower(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    /// A precoder needed a coefficient the CSIT pattern does not grant.
    /// Indices are 1-based to match the usual h_ij(t) notation.
    #[error("CSIT access violation: h{rx}{tx}({coef_slot}) is not available at slot {at_slot} under pattern {pattern}")]
    CsitViolation {
        rx: usize,
        tx: usize,
        coef_slot: usize,
        at_slot: usize,
        pattern: CsitPattern,
    },
    #[error("pattern {pattern} does not dominate the binding {binding} of {scheme}")]
    PatternMismatch {
        scheme: SchemeId,
        pattern: CsitPattern,
        binding: CsitPattern,
    },
    #[error("{0} is not an interference creation-resurrection scheme")]
    NotIcr(SchemeId),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("effective system of receiver {rx} is singular (|det M| = {det_abs:e})")]
    Singular { rx: usize, det_abs: f64 },
    #[error("combined row {row} of receiver {rx} leaks interference (residual {residual:e})")]
    InterferenceLeak {
        rx: usize,
        row: usize,
        residual: f64,
    },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DofError {
    #[error("power must be finite and positive, got {0}")]
    InvalidPower(f64),
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("slope fit needs at least two distinct powers above 1, got {0:?}")]
    DegenerateFit(Vec<f64>),
    #[error("trial {trial} stayed singular after {attempts} redraws")]
    RedrawBudget { trial: u64, attempts: u32 },
    #[error("slot state {0} has no individual DoF value (only PP, DD and NN do)")]
    UnsupportedState(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulationError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed report: {0}")]
    Format(String),
}
