//! Classification of all 9^3 three-slot CSIT patterns.
//!
//! Two characterizations are computed side by side. The declarative one checks
//! three requirements on the pattern:
//!
//! 1. every receiver row has known CSIT (delayed or perfect) at some slot,
//!    followed later by perfect CSIT;
//! 2. no slot leaves both rows without CSIT;
//! 3. the last slot has perfect CSIT on at least one row.
//!
//! The constructive one asks whether the pattern dominates one of the six
//! minimal patterns served by a scheme in this crate. The verdict is the
//! constructive one; disagreements between the two are reported, never hidden.

use serde::{Deserialize, Serialize};

use crate::csit::{CsitPattern, CsitState, SLOTS};
use crate::exec::Execution;
use crate::scheme::{select_scheme, table1, SchemeId};

/// `a >= b` slot-wise and row-wise.
pub fn dominates(a: &CsitPattern, b: &CsitPattern) -> bool {
    a.dominates(b)
}

/// Requirement 1 on a single row sequence.
pub fn known_then_perfect(seq: &[CsitState; SLOTS]) -> bool {
    (0..SLOTS).any(|t1| seq[t1].is_known() && seq[t1 + 1..].contains(&CsitState::Perfect))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requirements {
    pub known_then_perfect: bool,
    pub never_both_blind: bool,
    pub perfect_in_last_slot: bool,
}

impl Requirements {
    pub fn all(&self) -> bool {
        self.known_then_perfect && self.never_both_blind && self.perfect_in_last_slot
    }

    pub fn as_array(&self) -> [bool; 3] {
        [
            self.known_then_perfect,
            self.never_both_blind,
            self.perfect_in_last_slot,
        ]
    }
}

pub fn satisfies_theorem1(p: &CsitPattern) -> Requirements {
    let blind = |t: usize| p.slots[t].rows.iter().all(|s| *s == CsitState::None);
    Requirements {
        known_then_perfect: (0..2).all(|rx| known_then_perfect(&p.row_sequence(rx))),
        never_both_blind: !(0..SLOTS).any(blind),
        perfect_in_last_slot: p.slots[SLOTS - 1].rows.contains(&CsitState::Perfect),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Synergistic,
    NotCovered,
}

/// One row of the atlas. Field names double as CSV column names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternReport {
    pub pattern: CsitPattern,
    pub req1: bool,
    pub req2: bool,
    pub req3: bool,
    pub matched_minimal: Option<CsitPattern>,
    pub scheme: Option<SchemeId>,
    pub verdict: Verdict,
}

impl PatternReport {
    pub fn requirements(&self) -> Requirements {
        Requirements {
            known_then_perfect: self.req1,
            never_both_blind: self.req2,
            perfect_in_last_slot: self.req3,
        }
    }
}

pub fn classify(p: &CsitPattern) -> PatternReport {
    let req = satisfies_theorem1(p);
    let selected = select_scheme(p);
    PatternReport {
        pattern: *p,
        req1: req.known_then_perfect,
        req2: req.never_both_blind,
        req3: req.perfect_in_last_slot,
        matched_minimal: selected.map(|e| e.pattern),
        scheme: selected.map(|e| e.scheme),
        verdict: if selected.is_some() {
            Verdict::Synergistic
        } else {
            Verdict::NotCovered
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasCounts {
    pub total: usize,
    pub synergistic: usize,
    pub satisfies_requirements: usize,
    pub agreements: usize,
    pub disagreements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasSummary {
    pub counts: AtlasCounts,
    /// Patterns where the requirements and the dominance verdict differ.
    pub disagreements: Vec<CsitPattern>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atlas {
    pub reports: Vec<PatternReport>,
    pub summary: AtlasSummary,
}

pub fn enumerate_patterns() -> Atlas {
    enumerate_patterns_with(Execution::default())
}

pub fn enumerate_patterns_with(execution: Execution) -> Atlas {
    let all = CsitPattern::all();
    let reports = execution.map(all.len() as u64, |k| classify(&all[k as usize]));
    let disagreements: Vec<CsitPattern> = reports
        .iter()
        .filter(|r| r.requirements().all() != (r.verdict == Verdict::Synergistic))
        .map(|r| r.pattern)
        .collect();
    let counts = AtlasCounts {
        total: reports.len(),
        synergistic: reports
            .iter()
            .filter(|r| r.verdict == Verdict::Synergistic)
            .count(),
        satisfies_requirements: reports.iter().filter(|r| r.requirements().all()).count(),
        agreements: reports.len() - disagreements.len(),
        disagreements: disagreements.len(),
    };
    Atlas {
        reports,
        summary: AtlasSummary {
            counts,
            disagreements,
        },
    }
}

/// Elements of `set` that dominate no other element of `set`.
pub fn minimal_elements(set: &[CsitPattern]) -> Vec<CsitPattern> {
    set.iter()
        .filter(|p| !set.iter().any(|q| q != *p && p.dominates(q)))
        .copied()
        .collect()
}

/// Minimal row sequences satisfying requirement 1, in canonical order.
pub fn minimal_row_sequences() -> Vec<[CsitState; SLOTS]> {
    let mut all = Vec::new();
    for a in CsitState::ALL {
        for b in CsitState::ALL {
            for c in CsitState::ALL {
                all.push([a, b, c]);
            }
        }
    }
    let good: Vec<_> = all.into_iter().filter(known_then_perfect).collect();
    let le = |x: &[CsitState; SLOTS], y: &[CsitState; SLOTS]| x.iter().zip(y).all(|(a, b)| a <= b);
    good.iter()
        .filter(|s| !good.iter().any(|q| q != *s && le(q, s)))
        .copied()
        .collect()
}

/// Table-1 patterns covered by `p`, listed in table order.
pub fn covering_entries(p: &CsitPattern) -> Vec<(CsitPattern, SchemeId)> {
    table1()
        .iter()
        .filter(|e| p.dominates(&e.pattern))
        .map(|e| (e.pattern, e.scheme))
        .collect()
}
