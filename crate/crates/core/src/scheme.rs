//! Transmit schemes and the CSIT access guard.
//!
//! Every scheme sends u1, u2 (for receiver 1) and v1, v2 (for receiver 2) in
//! three slots. Slots that *create* interference transmit data symbols
//! directly. Slots that *resurrect* it precode a symbol from transmitter j by
//! `h_aj(now)^-1 h_aj(then)`, so receiver a hears again exactly what it heard
//! at slot `then`, while the other receiver gets a fresh combination of the
//! same symbols. Each family has a mirrored variant with the receiver roles
//! exchanged.
//!
//! Channel coefficients are only ever read through [`CsitView`], which
//! refuses anything the CSIT pattern does not grant at the current slot.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::channel::{ChannelRealization, SymbolVector, TransmitSignals, C64};
use crate::csit::{pattern, CsitPattern, CsitState, SLOTS};
use crate::error::{ParseError, SchemeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    Scheme1,
    Scheme1Mirror,
    Scheme2,
    Scheme2Mirror,
    Scheme3,
    Scheme3Mirror,
    TdmBaseline,
}

impl SchemeId {
    pub const ALL: [SchemeId; 7] = [
        SchemeId::Scheme1,
        SchemeId::Scheme1Mirror,
        SchemeId::Scheme2,
        SchemeId::Scheme2Mirror,
        SchemeId::Scheme3,
        SchemeId::Scheme3Mirror,
        SchemeId::TdmBaseline,
    ];

    pub const ICR: [SchemeId; 6] = [
        SchemeId::Scheme1,
        SchemeId::Scheme1Mirror,
        SchemeId::Scheme2,
        SchemeId::Scheme2Mirror,
        SchemeId::Scheme3,
        SchemeId::Scheme3Mirror,
    ];

    pub fn is_icr(self) -> bool {
        self != SchemeId::TdmBaseline
    }

    /// The minimal CSIT pattern this scheme is written for. The TDM baseline
    /// needs nothing.
    pub fn binding(self) -> CsitPattern {
        match self {
            SchemeId::Scheme1 => pattern("DD,PN,NP"),
            SchemeId::Scheme1Mirror => pattern("DD,NP,PN"),
            SchemeId::Scheme2 => pattern("ND,DN,PP"),
            SchemeId::Scheme2Mirror => pattern("DN,ND,PP"),
            SchemeId::Scheme3 => pattern("DN,PD,NP"),
            SchemeId::Scheme3Mirror => pattern("ND,DP,PN"),
            SchemeId::TdmBaseline => CsitPattern::uniform(CsitState::None),
        }
    }

    /// The same family with receiver roles exchanged.
    pub fn mirror(self) -> SchemeId {
        match self {
            SchemeId::Scheme1 => SchemeId::Scheme1Mirror,
            SchemeId::Scheme1Mirror => SchemeId::Scheme1,
            SchemeId::Scheme2 => SchemeId::Scheme2Mirror,
            SchemeId::Scheme2Mirror => SchemeId::Scheme2,
            SchemeId::Scheme3 => SchemeId::Scheme3Mirror,
            SchemeId::Scheme3Mirror => SchemeId::Scheme3,
            SchemeId::TdmBaseline => SchemeId::TdmBaseline,
        }
    }

    /// Most symbols one transmitter superposes in a single slot; the
    /// per-symbol power is the transmit power divided by this.
    pub fn symbols_per_transmitter(self) -> usize {
        if self.is_icr() {
            2
        } else {
            1
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            SchemeId::Scheme1 => "scheme1",
            SchemeId::Scheme1Mirror => "scheme1-mirror",
            SchemeId::Scheme2 => "scheme2",
            SchemeId::Scheme2Mirror => "scheme2-mirror",
            SchemeId::Scheme3 => "scheme3",
            SchemeId::Scheme3Mirror => "scheme3-mirror",
            SchemeId::TdmBaseline => "tdm",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SchemeId::Scheme1 => "Scheme 1",
            SchemeId::Scheme1Mirror => "Scheme 1 (mirror)",
            SchemeId::Scheme2 => "Scheme 2",
            SchemeId::Scheme2Mirror => "Scheme 2 (mirror)",
            SchemeId::Scheme3 => "Scheme 3",
            SchemeId::Scheme3Mirror => "Scheme 3 (mirror)",
            SchemeId::TdmBaseline => "TDM baseline",
        };
        f.write_str(s)
    }
}

impl FromStr for SchemeId {
    type Err = ParseError;

    /// Accepts tokens (`scheme2-mirror`, `tdm`) and display names
    /// (`Scheme 2 (mirror)`), case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        let id = match norm.as_str() {
            "scheme1" | "s1" | "1" => SchemeId::Scheme1,
            "scheme1mirror" | "s1m" | "1m" => SchemeId::Scheme1Mirror,
            "scheme2" | "s2" | "2" => SchemeId::Scheme2,
            "scheme2mirror" | "s2m" | "2m" => SchemeId::Scheme2Mirror,
            "scheme3" | "s3" | "3" => SchemeId::Scheme3,
            "scheme3mirror" | "s3m" | "3m" => SchemeId::Scheme3Mirror,
            "tdm" | "tdmbaseline" => SchemeId::TdmBaseline,
            _ => return Err(ParseError::Scheme(s.to_string())),
        };
        Ok(id)
    }
}

impl Serialize for SchemeId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SchemeId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A minimal synergistic pattern and the scheme that serves it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Entry {
    pub pattern: CsitPattern,
    pub scheme: SchemeId,
}

/// The six minimal patterns in listing order (left column, then right).
/// Listing order is the tie-break for [`select_scheme`].
pub fn table1() -> [Table1Entry; 6] {
    [
        SchemeId::Scheme1,
        SchemeId::Scheme1Mirror,
        SchemeId::Scheme3Mirror,
        SchemeId::Scheme3,
        SchemeId::Scheme2Mirror,
        SchemeId::Scheme2,
    ]
    .map(|scheme| Table1Entry {
        pattern: scheme.binding(),
        scheme,
    })
}

/// First Table-1 entry dominated by `p`, or `None` when no scheme here
/// covers the pattern.
pub fn select_scheme(p: &CsitPattern) -> Option<Table1Entry> {
    table1().into_iter().find(|e| p.dominates(&e.pattern))
}

/// One granted coefficient read: `h_{rx,tx}(coef_slot)` used while building
/// slot `at_slot` (all 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessRecord {
    pub rx: usize,
    pub tx: usize,
    pub coef_slot: usize,
    pub at_slot: usize,
}

/// Whether `h_{rx,*}(coef_slot)` is known to the transmitters while they build
/// slot `at_slot`: perfect CSIT gives the current slot, perfect or delayed
/// CSIT gives every earlier slot.
pub fn is_readable(p: &CsitPattern, rx: usize, coef_slot: usize, at_slot: usize) -> bool {
    let state = p.state(rx, coef_slot);
    (coef_slot == at_slot && state == CsitState::Perfect)
        || (coef_slot < at_slot && state.is_known())
}

/// Guarded, logged access to a channel realization under a CSIT pattern.
/// One view per plan build.
#[derive(Debug)]
pub struct CsitView<'a> {
    channel: &'a ChannelRealization,
    pattern: CsitPattern,
    log: Vec<AccessRecord>,
}

impl<'a> CsitView<'a> {
    pub fn new(channel: &'a ChannelRealization, pattern: CsitPattern) -> Self {
        CsitView {
            channel,
            pattern,
            log: Vec::new(),
        }
    }

    pub fn pattern(&self) -> &CsitPattern {
        &self.pattern
    }

    pub fn access_log(&self) -> &[AccessRecord] {
        &self.log
    }

    pub fn read(
        &mut self,
        rx: usize,
        tx: usize,
        coef_slot: usize,
        at_slot: usize,
    ) -> Result<C64, SchemeError> {
        if !is_readable(&self.pattern, rx, coef_slot, at_slot) {
            return Err(SchemeError::CsitViolation {
                rx: rx + 1,
                tx: tx + 1,
                coef_slot: coef_slot + 1,
                at_slot: at_slot + 1,
                pattern: self.pattern,
            });
        }
        self.log.push(AccessRecord {
            rx,
            tx,
            coef_slot,
            at_slot,
        });
        Ok(self.channel.coef(rx, tx, coef_slot))
    }

    /// `h_{rx,tx}(at)^-1 h_{rx,tx}(then)`: the gain that makes receiver `rx`
    /// hear transmitter `tx`'s contribution as it did at slot `then`.
    fn resurrect(
        &mut self,
        rx: usize,
        tx: usize,
        then: usize,
        at: usize,
    ) -> Result<C64, SchemeError> {
        let now = self.read(rx, tx, at, at)?;
        let before = self.read(rx, tx, then, at)?;
        Ok(before / now)
    }
}

/// Precoding coefficients `f[t][i][j]` for the symbol from transmitter j to
/// receiver i, so `X_j(t) = f[t][0][j] u_j + f[t][1][j] v_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmitPlan {
    pub scheme: SchemeId,
    pub f: [[[C64; 2]; 2]; SLOTS],
}

impl TransmitPlan {
    fn empty(scheme: SchemeId) -> Self {
        TransmitPlan {
            scheme,
            f: [[[C64::new(0.0, 0.0); 2]; 2]; SLOTS],
        }
    }

    /// Coefficient of the message (rx, tx) at slot t.
    pub fn coef(&self, rx: usize, tx: usize, t: usize) -> C64 {
        self.f[t][rx][tx]
    }

    pub fn transmit(&self, symbols: &SymbolVector) -> TransmitSignals {
        let mut out = TransmitSignals::zeros();
        for t in 0..SLOTS {
            for j in 0..2 {
                out.x[t][j] = self.f[t][0][j] * symbols.u[j] + self.f[t][1][j] * symbols.v[j];
            }
        }
        out
    }

    /// Exchange the u and v coefficients.
    pub fn swap_roles(&self) -> TransmitPlan {
        let mut out = self.clone();
        for t in 0..SLOTS {
            out.f[t].swap(0, 1);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plan serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Wire form: `{scheme, f}` with `f[t] = [f11, f12, f21, f22]`.
#[derive(Serialize, Deserialize)]
struct PlanWire {
    scheme: SchemeId,
    f: Vec<[C64; 4]>,
}

impl Serialize for TransmitPlan {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PlanWire {
            scheme: self.scheme,
            f: self
                .f
                .iter()
                .map(|m| [m[0][0], m[0][1], m[1][0], m[1][1]])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TransmitPlan {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = PlanWire::deserialize(deserializer)?;
        if wire.f.len() != SLOTS {
            return Err(serde::de::Error::invalid_length(
                wire.f.len(),
                &"three slots",
            ));
        }
        let mut plan = TransmitPlan::empty(wire.scheme);
        for (t, m) in wire.f.iter().enumerate() {
            plan.f[t] = [[m[0], m[1]], [m[2], m[3]]];
        }
        Ok(plan)
    }
}

const ONE: C64 = C64::new(1.0, 0.0);

/// Build the transmit plan of `scheme`, reading channel knowledge only
/// through `view`.
///
/// A CSIT violation is reported at the first slot that needs a coefficient
/// the pattern withholds. Views whose pattern does not dominate the scheme's
/// binding are rejected afterwards as a pattern mismatch.
pub fn build_plan(scheme: SchemeId, view: &mut CsitView<'_>) -> Result<TransmitPlan, SchemeError> {
    let plan = match scheme {
        SchemeId::Scheme1 => greedy_then_resurrect(scheme, view, 0)?,
        SchemeId::Scheme1Mirror => greedy_then_resurrect(scheme, view, 1)?,
        SchemeId::Scheme2 => split_then_joint(scheme, view, 0)?,
        SchemeId::Scheme2Mirror => split_then_joint(scheme, view, 1)?,
        SchemeId::Scheme3 => overlapping(scheme, view, 1)?,
        SchemeId::Scheme3Mirror => overlapping(scheme, view, 0)?,
        SchemeId::TdmBaseline => return Ok(build_tdm_plan(view)),
    };
    if !view.pattern().dominates(&scheme.binding()) {
        return Err(SchemeError::PatternMismatch {
            scheme,
            pattern: *view.pattern(),
            binding: scheme.binding(),
        });
    }
    Ok(plan)
}

/// Scheme 1 family. Slot 1 sends everything; slot 2 resurrects the
/// interference receiver `first` saw at slot 1; slot 3 does the same for the
/// other receiver.
fn greedy_then_resurrect(
    scheme: SchemeId,
    view: &mut CsitView<'_>,
    first: usize,
) -> Result<TransmitPlan, SchemeError> {
    let other = 1 - first;
    let mut plan = TransmitPlan::empty(scheme);
    for tx in 0..2 {
        plan.f[0][0][tx] = ONE;
        plan.f[0][1][tx] = ONE;
    }
    // Receiver `first` was interfered by the other receiver's symbols.
    for tx in 0..2 {
        plan.f[1][other][tx] = view.resurrect(first, tx, 0, 1)?;
    }
    for tx in 0..2 {
        plan.f[2][first][tx] = view.resurrect(other, tx, 0, 2)?;
    }
    Ok(plan)
}

/// Scheme 2 family. Slot 1 serves receiver `first`, slot 2 the other one,
/// each creating interference at the unserved receiver. Slot 3 resurrects
/// both interference terms at once.
fn split_then_joint(
    scheme: SchemeId,
    view: &mut CsitView<'_>,
    first: usize,
) -> Result<TransmitPlan, SchemeError> {
    let other = 1 - first;
    let mut plan = TransmitPlan::empty(scheme);
    for tx in 0..2 {
        plan.f[0][first][tx] = ONE;
        plan.f[1][other][tx] = ONE;
    }
    for tx in 0..2 {
        // `first`'s symbols interfered at `other` in slot 1, and vice versa in slot 2.
        plan.f[2][first][tx] = view.resurrect(other, tx, 0, 2)?;
        plan.f[2][other][tx] = view.resurrect(first, tx, 1, 2)?;
    }
    Ok(plan)
}

/// Scheme 3 family. Slot 1 serves receiver `first`. Slot 2 serves the other
/// receiver while resurrecting slot 1's interference at it. Slot 3
/// resurrects slot 2's new interference at `first`.
fn overlapping(
    scheme: SchemeId,
    view: &mut CsitView<'_>,
    first: usize,
) -> Result<TransmitPlan, SchemeError> {
    let other = 1 - first;
    let mut plan = TransmitPlan::empty(scheme);
    for tx in 0..2 {
        plan.f[0][first][tx] = ONE;
        plan.f[1][other][tx] = ONE;
    }
    for tx in 0..2 {
        plan.f[1][first][tx] = view.resurrect(other, tx, 0, 1)?;
    }
    for tx in 0..2 {
        plan.f[2][other][tx] = view.resurrect(first, tx, 1, 2)?;
    }
    Ok(plan)
}

/// Time-division baseline: one link active per slot. u1 from transmitter 1
/// in slot 1, v2 from transmitter 2 in slot 2, u2 from transmitter 2 in
/// slot 3. Reads no CSIT.
pub fn build_tdm_plan(_view: &mut CsitView<'_>) -> TransmitPlan {
    let mut plan = TransmitPlan::empty(SchemeId::TdmBaseline);
    plan.f[0][0][0] = ONE;
    plan.f[1][1][1] = ONE;
    plan.f[2][0][1] = ONE;
    plan
}
