//! CSIT availability taxonomy.
//!
//! Each receiver "row" (the pair of channels into one receiver) carries one of
//! three knowledge states per slot. A slot's state is a pair of row states and a
//! pattern is three consecutive slot states. Text syntax follows the usual
//! two-letter notation, first letter for the channels into receiver 1:
//! `"DD,PN,NP"`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// Number of slots in every pattern studied here.
pub const SLOTS: usize = 3;

/// Knowledge the transmitters hold about one receiver row in one slot.
///
/// The derived ordering is the dominance order `None < Delayed < Perfect`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CsitState {
    None,
    Delayed,
    Perfect,
}

impl CsitState {
    pub const ALL: [CsitState; 3] = [CsitState::Perfect, CsitState::Delayed, CsitState::None];

    pub fn letter(self) -> char {
        match self {
            CsitState::Perfect => 'P',
            CsitState::Delayed => 'D',
            CsitState::None => 'N',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'P' => Some(CsitState::Perfect),
            'D' => Some(CsitState::Delayed),
            'N' => Some(CsitState::None),
            _ => None,
        }
    }

    /// True for `Delayed` and `Perfect`: the slot's coefficients become known
    /// to the transmitters at some point.
    pub fn is_known(self) -> bool {
        self != CsitState::None
    }
}

/// CSIT state of one slot: `rows[0]` for the channels into receiver 1,
/// `rows[1]` for receiver 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlotCsit {
    pub rows: [CsitState; 2],
}

impl SlotCsit {
    pub const fn new(r1: CsitState, r2: CsitState) -> Self {
        SlotCsit { rows: [r1, r2] }
    }

    /// All 9 slot states in the canonical order PP, PD, PN, DP, DD, DN, NP, ND, NN.
    pub fn all() -> [SlotCsit; 9] {
        let mut out = [SlotCsit::new(CsitState::None, CsitState::None); 9];
        let mut k = 0;
        for a in CsitState::ALL {
            for b in CsitState::ALL {
                out[k] = SlotCsit::new(a, b);
                k += 1;
            }
        }
        out
    }

    pub fn row(&self, rx: usize) -> CsitState {
        self.rows[rx]
    }

    pub fn dominates(&self, other: &SlotCsit) -> bool {
        self.rows[0] >= other.rows[0] && self.rows[1] >= other.rows[1]
    }

    /// Position in [`SlotCsit::all`].
    pub fn index(&self) -> usize {
        let pos = |s: CsitState| match s {
            CsitState::Perfect => 0,
            CsitState::Delayed => 1,
            CsitState::None => 2,
        };
        pos(self.rows[0]) * 3 + pos(self.rows[1])
    }
}

impl fmt::Display for SlotCsit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.rows[0].letter(), self.rows[1].letter())
    }
}

impl FromStr for SlotCsit {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let token = s.trim();
        let mut chars = token.chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => {
                match (CsitState::from_letter(a), CsitState::from_letter(b)) {
                    (Some(a), Some(b)) => Ok(SlotCsit::new(a, b)),
                    _ => Err(ParseError::SlotState(token.to_string())),
                }
            }
            _ => Err(ParseError::SlotState(token.to_string())),
        }
    }
}

/// The 9 valid slot tokens, comma separated, for error messages.
pub fn slot_alphabet() -> String {
    SlotCsit::all()
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// CSIT availability over a three-slot extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CsitPattern {
    pub slots: [SlotCsit; SLOTS],
}

impl CsitPattern {
    pub const fn new(s1: SlotCsit, s2: SlotCsit, s3: SlotCsit) -> Self {
        CsitPattern {
            slots: [s1, s2, s3],
        }
    }

    /// Constant pattern with every row in `state`.
    pub const fn uniform(state: CsitState) -> Self {
        let s = SlotCsit::new(state, state);
        CsitPattern { slots: [s, s, s] }
    }

    /// State of row `rx` (0-based) at slot `t` (0-based).
    pub fn state(&self, rx: usize, t: usize) -> CsitState {
        self.slots[t].rows[rx]
    }

    /// Per-row sequence over the three slots.
    pub fn row_sequence(&self, rx: usize) -> [CsitState; SLOTS] {
        [self.state(rx, 0), self.state(rx, 1), self.state(rx, 2)]
    }

    /// Slot-wise, row-wise dominance under `None < Delayed < Perfect`.
    pub fn dominates(&self, other: &CsitPattern) -> bool {
        self.slots
            .iter()
            .zip(other.slots.iter())
            .all(|(a, b)| a.dominates(b))
    }

    /// Exchange the roles of the two receivers.
    pub fn swap_rows(&self) -> CsitPattern {
        let sw = |s: SlotCsit| SlotCsit::new(s.rows[1], s.rows[0]);
        CsitPattern::new(sw(self.slots[0]), sw(self.slots[1]), sw(self.slots[2]))
    }

    /// All 729 patterns, ordered lexicographically by [`SlotCsit::all`].
    pub fn all() -> Vec<CsitPattern> {
        let states = SlotCsit::all();
        let mut out = Vec::with_capacity(729);
        for a in states {
            for b in states {
                for c in states {
                    out.push(CsitPattern::new(a, b, c));
                }
            }
        }
        out
    }

    pub fn index(&self) -> usize {
        self.slots[0].index() * 81 + self.slots[1].index() * 9 + self.slots[2].index()
    }
}

impl fmt::Display for CsitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.slots[0], self.slots[1], self.slots[2])
    }
}

impl FromStr for CsitPattern {
    type Err = ParseError;

    /// Accepts `"DD,PN,NP"` with optional surrounding parentheses and spaces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let tokens: Vec<&str> = body.split(',').collect();
        if tokens.len() != SLOTS {
            return Err(ParseError::PatternArity(s.to_string()));
        }
        let mut slots = [SlotCsit::new(CsitState::None, CsitState::None); SLOTS];
        for (slot, token) in slots.iter_mut().zip(tokens) {
            *slot = token.parse()?;
        }
        Ok(CsitPattern { slots })
    }
}

impl Serialize for CsitPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CsitPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used by tests and tables: `pattern("DD,PN,NP")`.
///
/// Panics on malformed input; meant for literals.
pub fn pattern(s: &str) -> CsitPattern {
    s.parse().expect("malformed pattern literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_order() {
        assert!(CsitState::None < CsitState::Delayed);
        assert!(CsitState::Delayed < CsitState::Perfect);
    }

    #[test]
    fn nine_slot_states_in_canonical_order() {
        let names: Vec<String> = SlotCsit::all().iter().map(|s| s.to_string()).collect();
        assert_eq!(
            names,
            ["PP", "PD", "PN", "DP", "DD", "DN", "NP", "ND", "NN"]
        );
        for (k, s) in SlotCsit::all().iter().enumerate() {
            assert_eq!(s.index(), k);
        }
    }

    #[test]
    fn parse_and_display() {
        let p: CsitPattern = "DD,PN,NP".parse().unwrap();
        assert_eq!(p.to_string(), "DD,PN,NP");
        assert_eq!(p.state(0, 1), CsitState::Perfect);
        assert_eq!(p.state(1, 1), CsitState::None);
        assert!("(dd,PN,NP)".parse::<CsitPattern>().is_err());
        assert_eq!("(DD, PN, NP)".parse::<CsitPattern>().unwrap(), p);
    }

    #[test]
    fn malformed_patterns() {
        assert!(matches!(
            "XX,PN,NP".parse::<CsitPattern>(),
            Err(ParseError::SlotState(t)) if t == "XX"
        ));
        assert!(matches!(
            "DD,PN".parse::<CsitPattern>(),
            Err(ParseError::PatternArity(_))
        ));
        assert!("DDD,PN,NP".parse::<CsitPattern>().is_err());
        assert!(slot_alphabet().contains("ND"));
    }

    #[test]
    fn all_patterns_indexed() {
        let all = CsitPattern::all();
        assert_eq!(all.len(), 729);
        for (k, p) in all.iter().enumerate() {
            assert_eq!(p.index(), k);
        }
    }

    #[test]
    fn row_swap_is_involution() {
        let p = pattern("DN,PD,NP");
        assert_eq!(p.swap_rows(), pattern("ND,DP,PN"));
        assert_eq!(p.swap_rows().swap_rows(), p);
    }
}
