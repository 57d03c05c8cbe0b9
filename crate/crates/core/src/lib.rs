//! Interference creation-resurrection (ICR) for the two-user SISO X-channel
//! with alternating CSIT.
//!
//! Two transmitters each hold one symbol for each of two receivers. Over a
//! three-slot block the CSIT available about the channels into each receiver
//! alternates between perfect (P), delayed (D) and none (N). The schemes in
//! [`scheme`] send all four symbols in three slots when the CSIT pattern allows
//! it, for a sum DoF of 4/3.
//!
//! - [`csit`], [`channel`]: CSIT taxonomy, channel law, signals.
//! - [`scheme`]: transmit plans under a guard that enforces the CSIT pattern.
//! - [`decoder`]: slot combining and zero-forcing recovery.
//! - [`dof`]: Monte Carlo sum rates, slope fits, and per-state DoF values.
//! - [`classifier`]: the 729-pattern atlas.
//! - [`sim`], [`report`]: single-trial traces and report files.

pub mod channel;
pub mod classifier;
pub mod csit;
pub mod decoder;
pub mod dof;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod report;
pub mod scheme;
pub mod sim;

pub use channel::{
    apply_channel, draw_channel, ChannelRealization, ReceivedBlock, Symbol, SymbolVector,
    TransmitSignals, C64, DEFAULT_EPS,
};
pub use classifier::{classify, enumerate_patterns, satisfies_theorem1, PatternReport, Verdict};
pub use csit::{CsitPattern, CsitState, SlotCsit};
pub use decoder::{assemble_effective_system, decode, DecodeResult, EffectiveSystem};
pub use dof::{estimate_dof, sum_rate, weighted_average_dof, DofEstimate, RatePoint};
pub use exec::Execution;
pub use scheme::{build_plan, build_tdm_plan, select_scheme, CsitView, SchemeId, TransmitPlan};
