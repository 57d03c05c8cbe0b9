//! Empirical DoF by sum-rate slope fitting, and the per-state DoF table.
//!
//! Each trial draws a channel, builds both receivers' effective systems and
//! scores them with the Gaussian-input rate
//! `log2 det(I + p M M^H K^-1)`, where `p` is the transmit power split evenly
//! over each transmitter's symbols and `K` is the covariance of the combined
//! noise. The sum over receivers is divided by the three slots of the block.
//!
//! Trial seeds depend only on `(seed, trial, redraw)`, never on the power, so
//! a sweep evaluates every power on the same channel draws. Precoders are not
//! renormalized: the `h^-1 h` gains of the resurrection slots raise the
//! average transmit power above `P` by a channel-dependent factor, which
//! moves the intercept of the rate curve and leaves its slope alone.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::channel::{derive_seed, draw_channel, DEFAULT_EPS};
use crate::csit::{CsitPattern, CsitState, SlotCsit};
use crate::decoder::{assemble_effective_system, EffectiveSystem};
use crate::error::DofError;
use crate::exec::Execution;
use crate::scheme::SchemeId;

/// Singular draws tolerated per trial before giving up.
pub const MAX_REDRAWS: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    /// Linear transmit power.
    pub power: f64,
    /// Bits per channel use.
    pub sum_rate: f64,
    pub trials: u64,
    /// Singular realizations that were redrawn.
    pub skipped: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DofEstimate {
    pub scheme: SchemeId,
    pub slope: f64,
    pub intercept: f64,
    pub points: Vec<RatePoint>,
}

/// Knobs shared by every rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateConfig {
    pub eps: f64,
    pub execution: Execution,
}

impl Default for RateConfig {
    fn default() -> Self {
        RateConfig {
            eps: DEFAULT_EPS,
            execution: Execution::default(),
        }
    }
}

/// Block rate in bits per channel use of an assembled system at per-symbol
/// power `p`.
pub fn block_rate(system: &EffectiveSystem, p: f64) -> f64 {
    system
        .receivers
        .iter()
        .map(|r| {
            let k_inv =
                r.k.inverse()
                    .expect("combined-noise covariance is invertible");
            let a = r.m.mul(&r.m.adjoint()).mul(&k_inv);
            // det(I + pA) - 1; every term is non-negative for PSD A.
            let excess = match a.order() {
                1 => p * a.get(0, 0).re,
                _ => p * a.trace().re + p * p * a.det().re,
            };
            excess.ln_1p() / std::f64::consts::LN_2
        })
        .sum::<f64>()
        / 3.0
}

/// Draw the trial's channel, redrawing singular realizations.
/// Returns the system and how many draws were discarded.
pub fn trial_system(
    scheme: SchemeId,
    seed: u64,
    trial: u64,
    eps: f64,
) -> Result<(EffectiveSystem, u32), DofError> {
    for attempt in 0..MAX_REDRAWS {
        let h = draw_channel(derive_seed(seed, trial, attempt as u64), eps)?;
        let system = assemble_effective_system(scheme, &h)?;
        if !system.is_singular() {
            return Ok((system, attempt));
        }
    }
    Err(DofError::RedrawBudget {
        trial,
        attempts: MAX_REDRAWS,
    })
}

fn check_power(power: f64) -> Result<(), DofError> {
    if power.is_finite() && power > 0.0 {
        Ok(())
    } else {
        Err(DofError::InvalidPower(power))
    }
}

/// Average block rate of `scheme` at transmit power `power` over `trials`
/// seeded trials.
pub fn sum_rate(
    scheme: SchemeId,
    power: f64,
    trials: u64,
    seed: u64,
) -> Result<RatePoint, DofError> {
    sum_rate_with(scheme, power, trials, seed, RateConfig::default())
}

pub fn sum_rate_with(
    scheme: SchemeId,
    power: f64,
    trials: u64,
    seed: u64,
    cfg: RateConfig,
) -> Result<RatePoint, DofError> {
    Ok(sweep_rates(scheme, &[power], trials, seed, cfg)?.remove(0))
}

/// Rates at several powers over one shared set of channel draws.
pub fn sweep_rates(
    scheme: SchemeId,
    powers: &[f64],
    trials: u64,
    seed: u64,
    cfg: RateConfig,
) -> Result<Vec<RatePoint>, DofError> {
    for &p in powers {
        check_power(p)?;
    }
    if trials == 0 {
        return Err(DofError::NoTrials);
    }
    let per_symbol: Vec<f64> = powers
        .iter()
        .map(|p| p / scheme.symbols_per_transmitter() as f64)
        .collect();
    let per_trial = cfg.execution.try_map(trials, |trial| {
        let (system, skipped) = trial_system(scheme, seed, trial, cfg.eps)?;
        let rates: Vec<f64> = per_symbol.iter().map(|&p| block_rate(&system, p)).collect();
        Ok::<_, DofError>((rates, skipped))
    })?;
    let skipped: u64 = per_trial.iter().map(|(_, s)| *s as u64).sum();
    Ok(powers
        .iter()
        .enumerate()
        .map(|(k, &power)| {
            let total: f64 = per_trial.iter().map(|(r, _)| r[k]).sum();
            RatePoint {
                power,
                sum_rate: total / trials as f64,
                trials,
                skipped,
            }
        })
        .collect())
}

/// Ordinary least squares `y = slope * x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Slope of the sum rate against `log2 P`.
pub fn estimate_dof(
    scheme: SchemeId,
    powers: &[f64],
    trials: u64,
    seed: u64,
) -> Result<DofEstimate, DofError> {
    estimate_dof_with(scheme, powers, trials, seed, RateConfig::default())
}

pub fn estimate_dof_with(
    scheme: SchemeId,
    powers: &[f64],
    trials: u64,
    seed: u64,
    cfg: RateConfig,
) -> Result<DofEstimate, DofError> {
    let mut distinct = powers.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if powers.len() < 2
        || distinct.len() != powers.len()
        || powers.iter().any(|p| p.is_nan() || *p <= 1.0)
    {
        return Err(DofError::DegenerateFit(powers.to_vec()));
    }
    let points = sweep_rates(scheme, powers, trials, seed, cfg)?;
    let xs: Vec<f64> = points.iter().map(|p| p.power.log2()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.sum_rate).collect();
    let (slope, intercept) = fit_line(&xs, &ys);
    Ok(DofEstimate {
        scheme,
        slope,
        intercept,
        points,
    })
}

/// Default sweep: 2^20, 2^25, ..., 2^40.
pub fn default_powers() -> Vec<f64> {
    (0..5).map(|k| 2f64.powi(20 + 5 * k)).collect()
}

/// DoF of the X-channel with perfect CSIT throughout (also its upper bound).
pub fn perfect_csit_dof() -> Rational64 {
    Rational64::new(4, 3)
}

/// Value tabulated for delayed CSIT throughout. Cited both as achievable and
/// as an upper bound; stored once either way.
pub fn delayed_csit_dof() -> Rational64 {
    Rational64::new(6, 5)
}

pub fn no_csit_dof() -> Rational64 {
    Rational64::from_integer(1)
}

/// Individual DoF of a slot state held constant. Only the symmetric states
/// PP, DD and NN have one.
pub fn state_dof(slot: &SlotCsit) -> Option<Rational64> {
    match slot.rows {
        [CsitState::Perfect, CsitState::Perfect] => Some(perfect_csit_dof()),
        [CsitState::Delayed, CsitState::Delayed] => Some(delayed_csit_dof()),
        [CsitState::None, CsitState::None] => Some(no_csit_dof()),
        _ => None,
    }
}

/// DoF the pattern would reach if its slots did not interact: the plain
/// average of the per-slot state DoF, computed exactly.
pub fn weighted_average_dof(p: &CsitPattern) -> Result<Rational64, DofError> {
    let mut total = Rational64::from_integer(0);
    for slot in &p.slots {
        total += state_dof(slot).ok_or_else(|| DofError::UnsupportedState(slot.to_string()))?;
    }
    Ok(total / Rational64::from_integer(p.slots.len() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csit::pattern;

    #[test]
    fn weighted_average_values() {
        assert_eq!(
            weighted_average_dof(&pattern("DD,DD,PP")).unwrap(),
            Rational64::new(56, 45)
        );
        assert_eq!(
            weighted_average_dof(&pattern("PP,PP,PP")).unwrap(),
            Rational64::new(4, 3)
        );
        assert_eq!(
            weighted_average_dof(&pattern("NN,NN,NN")).unwrap(),
            Rational64::from_integer(1)
        );
        let r = weighted_average_dof(&pattern("DD,DD,PP")).unwrap();
        assert_eq!((*r.numer(), *r.denom()), (56, 45));
        assert!(matches!(
            weighted_average_dof(&pattern("DD,PN,PP")),
            Err(DofError::UnsupportedState(s)) if s == "PN"
        ));
    }

    #[test]
    fn tiny_power_gives_tiny_rate() {
        for scheme in SchemeId::ALL {
            let r = sum_rate(scheme, 1e-12, 200, 5).unwrap();
            assert!(
                r.sum_rate >= 0.0 && r.sum_rate < 1e-9,
                "{scheme}: {}",
                r.sum_rate
            );
        }
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(
            sum_rate(SchemeId::Scheme1, 0.0, 10, 1),
            Err(DofError::InvalidPower(0.0))
        );
        assert_eq!(
            sum_rate(SchemeId::Scheme1, 1.0, 0, 1),
            Err(DofError::NoTrials)
        );
        let p = 2f64.powi(20);
        assert!(matches!(
            estimate_dof(SchemeId::Scheme1, &[p, p], 10, 1),
            Err(DofError::DegenerateFit(_))
        ));
        assert!(matches!(
            estimate_dof(SchemeId::Scheme1, &[p], 10, 1),
            Err(DofError::DegenerateFit(_))
        ));
        assert!(matches!(
            estimate_dof(SchemeId::Scheme1, &[0.5, p], 10, 1),
            Err(DofError::DegenerateFit(_))
        ));
    }

    #[test]
    fn fit_recovers_exact_line() {
        let xs = [20.0, 25.0, 30.0, 35.0, 40.0];
        let ys: Vec<f64> = xs.iter().map(|x| 4.0 / 3.0 * x - 0.7).collect();
        let (m, b) = fit_line(&xs, &ys);
        assert!((m - 4.0 / 3.0).abs() < 1e-12 && (b + 0.7).abs() < 1e-10);
    }

    #[test]
    fn single_power_matches_sweep_entry() {
        let powers = default_powers();
        let cfg = RateConfig::default();
        let sweep = sweep_rates(SchemeId::Scheme3, &powers, 50, 9, cfg).unwrap();
        let one = sum_rate_with(SchemeId::Scheme3, powers[2], 50, 9, cfg).unwrap();
        assert_eq!(sweep[2], one);
    }

    #[test]
    fn execution_modes_are_bit_identical() {
        let seq = RateConfig {
            execution: Execution::Sequential,
            ..RateConfig::default()
        };
        let par = RateConfig {
            execution: Execution::Parallel,
            ..RateConfig::default()
        };
        let a = sweep_rates(SchemeId::Scheme2, &default_powers(), 300, 77, seq).unwrap();
        let b = sweep_rates(SchemeId::Scheme2, &default_powers(), 300, 77, par).unwrap();
        assert_eq!(a, b);
    }
}
