//! Per-receiver slot combining and zero-forcing recovery.
//!
//! Each receiver forms two interference-free observations of its own pair of
//! symbols: one by subtracting the slot where the interference was
//! resurrected from the slot where it was created, the other by taking a slot
//! that carried no interference at all. The recipes are fixed per scheme; the
//! matrices are obtained by pushing the scheme's own transmit plan through the
//! channel and checked at construction to carry no interference.

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, ReceivedBlock, Symbol, SymbolVector, C64};
use crate::csit::SLOTS;
use crate::error::DecodeError;
use crate::linalg::SmallMat;
use crate::scheme::{build_plan, CsitView, SchemeId, TransmitPlan};

/// Relative singularity threshold: flag when `|det M| < EPS_DET * ||M||_F^n`.
pub const EPS_DET: f64 = 1e-12;

/// Allowed interference residue on a combined row, relative to the sum of
/// the magnitudes of every term that entered it.
const LEAK_TOL: f64 = 1e-9;

/// One combined observation: `sum_t weights[t] * Y_rx(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombiningRow {
    pub weights: [i8; SLOTS],
    /// Which linear combination of the desired symbols this row realizes
    /// (1 or 2).
    pub combination: u8,
    /// True if the row is a difference that cancels an interference term.
    pub cancels_interference: bool,
}

impl CombiningRow {
    fn select(slot: usize, combination: u8) -> Self {
        let mut weights = [0; SLOTS];
        weights[slot] = 1;
        CombiningRow {
            weights,
            combination,
            cancels_interference: false,
        }
    }

    fn difference(plus: usize, minus: usize, combination: u8) -> Self {
        let mut weights = [0; SLOTS];
        weights[plus] = 1;
        weights[minus] = -1;
        CombiningRow {
            weights,
            combination,
            cancels_interference: true,
        }
    }

    /// Human-readable form for receiver `rx` (0-based), e.g.
    /// `Y1(1) - Y1(2) = L_1^1 (I_1 cancelled)`.
    pub fn describe(&self, rx: usize) -> String {
        let mut terms = String::new();
        for (t, w) in self.weights.iter().enumerate() {
            let sign = match w {
                1 if terms.is_empty() => "",
                1 => " + ",
                -1 if terms.is_empty() => "-",
                -1 => " - ",
                _ => continue,
            };
            terms.push_str(&format!("{sign}Y{}({})", rx + 1, t + 1));
        }
        let mut out = format!("{terms} = L_{}^{}", rx + 1, self.combination);
        if self.cancels_interference {
            out.push_str(&format!(" (I_{} cancelled)", rx + 1));
        }
        out
    }
}

/// Combining rows and desired symbols for both receivers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombiningRecipe {
    pub scheme: SchemeId,
    pub rows: [Vec<CombiningRow>; 2],
    pub desired: [Vec<Symbol>; 2],
}

/// The hard-coded recipe for `scheme`.
pub fn recipe(scheme: SchemeId) -> CombiningRecipe {
    use CombiningRow as R;
    // (rows for receiver `first`, rows for the other) per family.
    let (first, rows_first, rows_other) = match scheme {
        SchemeId::Scheme1 | SchemeId::Scheme1Mirror => (
            if scheme == SchemeId::Scheme1 { 0 } else { 1 },
            vec![R::difference(0, 1, 1), R::select(2, 2)],
            vec![R::difference(0, 2, 1), R::select(1, 2)],
        ),
        SchemeId::Scheme2 | SchemeId::Scheme2Mirror => (
            if scheme == SchemeId::Scheme2 { 0 } else { 1 },
            vec![R::difference(2, 1, 2), R::select(0, 1)],
            vec![R::difference(2, 0, 2), R::select(1, 1)],
        ),
        // `first` is the receiver served in slot 1.
        SchemeId::Scheme3 | SchemeId::Scheme3Mirror => (
            if scheme == SchemeId::Scheme3 { 1 } else { 0 },
            vec![R::select(0, 1), R::difference(1, 2, 2)],
            vec![R::difference(1, 0, 1), R::select(2, 2)],
        ),
        SchemeId::TdmBaseline => {
            return CombiningRecipe {
                scheme,
                rows: [
                    vec![R::select(0, 1), R::select(2, 2)],
                    vec![R::select(1, 1)],
                ],
                desired: [vec![Symbol::U1, Symbol::U2], vec![Symbol::V2]],
            }
        }
    };
    let mut rows = [Vec::new(), Vec::new()];
    rows[first] = rows_first;
    rows[1 - first] = rows_other;
    CombiningRecipe {
        scheme,
        rows,
        desired: [vec![Symbol::U1, Symbol::U2], vec![Symbol::V1, Symbol::V2]],
    }
}

/// One receiver's interference-free system `z = M s + w`, `Cov(w) = K`
/// at unit noise power.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverSystem {
    pub m: SmallMat,
    pub k: SmallMat,
    pub det_abs: f64,
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveSystem {
    pub recipe: CombiningRecipe,
    pub receivers: [ReceiverSystem; 2],
}

impl EffectiveSystem {
    pub fn is_singular(&self) -> bool {
        self.receivers.iter().any(|r| r.singular)
    }
}

/// Gain of `sym` on the combined row of receiver `rx`.
fn row_gain(
    plan: &TransmitPlan,
    h: &ChannelRealization,
    rx: usize,
    row: &CombiningRow,
    sym: Symbol,
) -> C64 {
    let tx = sym.transmitter();
    (0..SLOTS)
        .map(|t| {
            C64::new(row.weights[t] as f64, 0.0)
                * h.coef(rx, tx, t)
                * plan.coef(sym.receiver(), tx, t)
        })
        .sum()
}

fn row_scale(plan: &TransmitPlan, h: &ChannelRealization, rx: usize, row: &CombiningRow) -> f64 {
    let mut scale = 0.0;
    for t in 0..SLOTS {
        if row.weights[t] == 0 {
            continue;
        }
        for sym in Symbol::ALL {
            let tx = sym.transmitter();
            scale += (h.coef(rx, tx, t) * plan.coef(sym.receiver(), tx, t)).norm();
        }
    }
    scale
}

/// Combine the scheme's plan on `h` into both receivers' effective systems.
///
/// Singular systems are returned with their flag set rather than as errors;
/// [`decode`] refuses them.
pub fn assemble_effective_system(
    scheme: SchemeId,
    h: &ChannelRealization,
) -> Result<EffectiveSystem, DecodeError> {
    let mut view = CsitView::new(h, scheme.binding());
    let plan = build_plan(scheme, &mut view)?;
    let recipe = recipe(scheme);
    let receivers = [0, 1].map(|rx| {
        let rows = &recipe.rows[rx];
        let desired = &recipe.desired[rx];
        let n = rows.len();
        let mut m = SmallMat::zeros(n);
        let mut k = SmallMat::zeros(n);
        let mut leak = None;
        for (r, row) in rows.iter().enumerate() {
            for (c, sym) in desired.iter().enumerate() {
                m.set(r, c, row_gain(&plan, h, rx, row, *sym));
            }
            let scale = row_scale(&plan, h, rx, row);
            for sym in Symbol::ALL.iter().filter(|s| !desired.contains(s)) {
                let residue = row_gain(&plan, h, rx, row, *sym).norm();
                if residue > LEAK_TOL * scale {
                    leak = Some((r, residue));
                }
            }
            for (b, other) in rows.iter().enumerate() {
                let cov: i32 = (0..SLOTS)
                    .map(|t| row.weights[t] as i32 * other.weights[t] as i32)
                    .sum();
                k.set(r, b, C64::new(cov as f64, 0.0));
            }
        }
        let det_abs = m.det().norm();
        let singular = det_abs < EPS_DET * m.frobenius_sqr().powf(n as f64 / 2.0);
        (
            ReceiverSystem {
                m,
                k,
                det_abs,
                singular,
            },
            leak,
        )
    });
    let [(r0, l0), (r1, l1)] = receivers;
    for (rx, leak) in [l0, l1].into_iter().enumerate() {
        if let Some((row, residual)) = leak {
            return Err(DecodeError::InterferenceLeak {
                rx: rx + 1,
                row: row + 1,
                residual,
            });
        }
    }
    Ok(EffectiveSystem {
        recipe,
        receivers: [r0, r1],
    })
}

/// Symbols recovered by zero forcing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    /// Indexed like [`Symbol::ALL`]; `None` for symbols the scheme does not
    /// carry (the TDM baseline has no v1).
    pub recovered: [Option<C64>; 4],
    /// Largest absolute recovery error, when ground truth was supplied.
    pub residual: Option<f64>,
}

impl DecodeResult {
    pub fn get(&self, s: Symbol) -> Option<C64> {
        self.recovered[Symbol::ALL.iter().position(|x| *x == s).unwrap()]
    }

    /// Largest error relative to the largest transmitted magnitude among the
    /// recovered symbols.
    pub fn relative_error(&self, truth: &SymbolVector) -> f64 {
        let mut err: f64 = 0.0;
        let mut mag: f64 = 0.0;
        for (s, got) in Symbol::ALL.iter().zip(self.recovered.iter()) {
            if let Some(got) = got {
                err = err.max((got - truth.get(*s)).norm());
                mag = mag.max(truth.get(*s).norm());
            }
        }
        if mag == 0.0 {
            err
        } else {
            err / mag
        }
    }
}

/// Combine the received slots and solve each receiver's system.
pub fn decode(
    system: &EffectiveSystem,
    received: &ReceivedBlock,
    truth: Option<&SymbolVector>,
) -> Result<DecodeResult, DecodeError> {
    let mut recovered = [None; 4];
    for (rx, sys) in system.receivers.iter().enumerate() {
        let rows = &system.recipe.rows[rx];
        if sys.singular {
            return Err(DecodeError::Singular {
                rx: rx + 1,
                det_abs: sys.det_abs,
            });
        }
        let z: Vec<C64> = rows
            .iter()
            .map(|row| {
                (0..SLOTS)
                    .map(|t| C64::new(row.weights[t] as f64, 0.0) * received.y[rx][t])
                    .sum()
            })
            .collect();
        let s = sys.m.solve(&z).ok_or(DecodeError::Singular {
            rx: rx + 1,
            det_abs: sys.det_abs,
        })?;
        for (sym, value) in system.recipe.desired[rx].iter().zip(s) {
            recovered[Symbol::ALL.iter().position(|x| x == sym).unwrap()] = Some(value);
        }
    }
    let residual = truth.map(|truth| {
        Symbol::ALL
            .iter()
            .zip(recovered.iter())
            .filter_map(|(s, got)| got.map(|g| (g - truth.get(*s)).norm()))
            .fold(0.0, f64::max)
    });
    Ok(DecodeResult {
        recovered,
        residual,
    })
}
