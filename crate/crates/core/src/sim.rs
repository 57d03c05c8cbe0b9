//! One end-to-end block: plan, channel, noise, combining, recovery.

use serde::{Deserialize, Serialize};

use crate::channel::{
    apply_channel, derive_seed, draw_channel, ChannelRealization, ReceivedBlock, SymbolVector,
    TransmitSignals, DEFAULT_EPS,
};
use crate::csit::CsitPattern;
use crate::decoder::{assemble_effective_system, decode, CombiningRecipe, DecodeResult};
use crate::error::SimulationError;
use crate::scheme::{build_plan, AccessRecord, CsitView, SchemeId, TransmitPlan};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRequest {
    pub scheme: SchemeId,
    /// CSIT the transmitters actually have; the plan is built under it.
    pub pattern: CsitPattern,
    pub seed: u64,
    pub noise_power: f64,
    /// Transmit power; symbols are scaled to `power / symbols_per_transmitter`.
    pub power: f64,
    pub eps: f64,
}

impl TrialRequest {
    pub fn new(scheme: SchemeId, seed: u64) -> Self {
        TrialRequest {
            scheme,
            pattern: scheme.binding(),
            seed,
            noise_power: 0.0,
            power: scheme.symbols_per_transmitter() as f64,
            eps: DEFAULT_EPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub scheme: SchemeId,
    pub pattern: CsitPattern,
    pub seed: u64,
    pub power: f64,
    pub channel: ChannelRealization,
    pub symbols: SymbolVector,
    pub plan: TransmitPlan,
    pub access_log: Vec<AccessRecord>,
    pub transmit: TransmitSignals,
    pub received: ReceivedBlock,
    pub recipe: CombiningRecipe,
    pub decoded: DecodeResult,
    pub relative_error: f64,
}

/// Channel from `seed`, symbols and noise from seeds derived from it.
pub fn simulate_trial(req: &TrialRequest) -> Result<SimulationTrace, SimulationError> {
    let channel = draw_channel(req.seed, req.eps)?;
    simulate_on(req, channel)
}

/// Same as [`simulate_trial`] on a given channel.
pub fn simulate_on(
    req: &TrialRequest,
    channel: ChannelRealization,
) -> Result<SimulationTrace, SimulationError> {
    let scale = (req.power / req.scheme.symbols_per_transmitter() as f64).sqrt();
    let symbols = SymbolVector::random(derive_seed(req.seed, 1, 0)).scaled(scale);
    let mut view = CsitView::new(&channel, req.pattern);
    let plan = build_plan(req.scheme, &mut view)?;
    let access_log = view.access_log().to_vec();
    let transmit = plan.transmit(&symbols);
    let received = apply_channel(
        &transmit,
        &channel,
        req.noise_power,
        derive_seed(req.seed, 2, 0),
    )?;
    let system = assemble_effective_system(req.scheme, &channel)?;
    let decoded = decode(&system, &received, Some(&symbols))?;
    let relative_error = decoded.relative_error(&symbols);
    Ok(SimulationTrace {
        scheme: req.scheme,
        pattern: req.pattern,
        seed: req.seed,
        power: req.power,
        channel,
        symbols,
        plan,
        access_log,
        transmit,
        received,
        recipe: system.recipe,
        decoded,
        relative_error,
    })
}
