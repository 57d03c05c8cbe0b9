//! Two-user SISO X-channel over a three-slot block.
//!
//! `Y_i(t) = h_i1(t) X_1(t) + h_i2(t) X_2(t) + N_i(t)` with i.i.d. CN(0,1)
//! coefficients and CN(0, noise_power) noise. All indices in this crate are
//! 0-based (`rx`, `tx`, `t`); error messages and reports print them 1-based.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::csit::SLOTS;
use crate::error::ChannelError;

pub type C64 = Complex64;

/// Default floor on coefficient magnitude; smaller draws are resampled.
pub const DEFAULT_EPS: f64 = 1e-6;

/// Per-slot 2x2 coefficients, indexed `[t][rx][tx]`.
pub type Coefficients = [[[C64; 2]; 2]; SLOTS];

/// Deterministically mix a base seed with two indices into a fresh seed.
///
/// SplitMix64 finalizer over a simple combination; used to give every Monte
/// Carlo trial (and every redraw of it) its own reproducible stream.
pub fn derive_seed(base: u64, a: u64, b: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(mix(mix(base) ^ a) ^ b.rotate_left(32))
}

fn complex_gaussian<R: Rng>(rng: &mut R, std_per_dim: f64) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * std_per_dim, im * std_per_dim)
}

/// One channel realization for the whole block.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub seed: u64,
    pub eps: f64,
    pub h: Coefficients,
}

impl ChannelRealization {
    /// Wrap hand-picked coefficients (tests, walkthroughs). `seed` is 0 and
    /// `eps` is the smallest coefficient magnitude present.
    pub fn from_coefficients(h: Coefficients) -> Self {
        let eps = h
            .iter()
            .flatten()
            .flatten()
            .map(|c| c.norm())
            .fold(f64::INFINITY, f64::min);
        ChannelRealization { seed: 0, eps, h }
    }

    /// Every coefficient equal to 1.
    pub fn identity() -> Self {
        Self::from_coefficients([[[C64::new(1.0, 0.0); 2]; 2]; SLOTS])
    }

    /// h_{rx,tx}(t), 0-based.
    #[inline]
    pub fn coef(&self, rx: usize, tx: usize, t: usize) -> C64 {
        self.h[t][rx][tx]
    }

    pub fn set_coef(&mut self, rx: usize, tx: usize, t: usize, value: C64) {
        self.h[t][rx][tx] = value;
    }

    /// Exchange the two receivers (rows of every slot matrix).
    pub fn swap_rows(&self) -> Self {
        let mut out = self.clone();
        for t in 0..SLOTS {
            out.h[t].swap(0, 1);
        }
        out
    }

    pub fn min_magnitude(&self) -> f64 {
        self.h
            .iter()
            .flatten()
            .flatten()
            .map(|c| c.norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel realization serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Wire form: `{seed, eps, h}` with `h[t] = [h11, h12, h21, h22]` and each
/// coefficient as `[re, im]`.
#[derive(Serialize, Deserialize)]
struct ChannelWire {
    seed: u64,
    eps: f64,
    h: Vec<[C64; 4]>,
}

impl Serialize for ChannelRealization {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let h = self
            .h
            .iter()
            .map(|m| [m[0][0], m[0][1], m[1][0], m[1][1]])
            .collect();
        ChannelWire {
            seed: self.seed,
            eps: self.eps,
            h,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ChannelRealization {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = ChannelWire::deserialize(deserializer)?;
        if wire.h.len() != SLOTS {
            return Err(serde::de::Error::invalid_length(
                wire.h.len(),
                &"three slots of coefficients",
            ));
        }
        let mut h = [[[C64::new(0.0, 0.0); 2]; 2]; SLOTS];
        for (t, row) in wire.h.iter().enumerate() {
            h[t] = [[row[0], row[1]], [row[2], row[3]]];
        }
        Ok(ChannelRealization {
            seed: wire.seed,
            eps: wire.eps,
            h,
        })
    }
}

/// Draw 12 i.i.d. CN(0,1) coefficients; any with magnitude below `eps` is
/// redrawn from the same stream.
pub fn draw_channel(seed: u64, eps: f64) -> Result<ChannelRealization, ChannelError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ChannelError::InvalidFloor(eps));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = [[[C64::new(0.0, 0.0); 2]; 2]; SLOTS];
    for slot in h.iter_mut() {
        for row in slot.iter_mut() {
            for c in row.iter_mut() {
                *c = loop {
                    let z = complex_gaussian(&mut rng, FRAC_1_SQRT_2);
                    if z.norm() >= eps {
                        break z;
                    }
                };
            }
        }
    }
    Ok(ChannelRealization { seed, eps, h })
}

/// The four data symbols of one block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolVector {
    /// `u[j]`: symbol from transmitter j intended for receiver 1.
    pub u: [C64; 2],
    /// `v[j]`: symbol from transmitter j intended for receiver 2.
    pub v: [C64; 2],
}

/// Names one of the four messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    U1,
    U2,
    V1,
    V2,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::U1, Symbol::U2, Symbol::V1, Symbol::V2];

    pub fn new(rx: usize, tx: usize) -> Self {
        match (rx, tx) {
            (0, 0) => Symbol::U1,
            (0, 1) => Symbol::U2,
            (1, 0) => Symbol::V1,
            (1, 1) => Symbol::V2,
            _ => panic!("symbol index out of range: ({rx}, {tx})"),
        }
    }

    /// Intended receiver (0-based).
    pub fn receiver(self) -> usize {
        match self {
            Symbol::U1 | Symbol::U2 => 0,
            Symbol::V1 | Symbol::V2 => 1,
        }
    }

    /// Originating transmitter (0-based).
    pub fn transmitter(self) -> usize {
        match self {
            Symbol::U1 | Symbol::V1 => 0,
            Symbol::U2 | Symbol::V2 => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::U1 => "u1",
            Symbol::U2 => "u2",
            Symbol::V1 => "v1",
            Symbol::V2 => "v2",
        }
    }
}

impl SymbolVector {
    pub fn new(u1: C64, u2: C64, v1: C64, v2: C64) -> Self {
        SymbolVector {
            u: [u1, u2],
            v: [v1, v2],
        }
    }

    pub fn zeros() -> Self {
        let z = C64::new(0.0, 0.0);
        Self::new(z, z, z, z)
    }

    /// Unit-energy QPSK points, deterministic in `seed`.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut qpsk = || {
            let re = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let im = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            C64::new(re, im) * FRAC_1_SQRT_2
        };
        Self::new(qpsk(), qpsk(), qpsk(), qpsk())
    }

    pub fn get(&self, s: Symbol) -> C64 {
        match s {
            Symbol::U1 => self.u[0],
            Symbol::U2 => self.u[1],
            Symbol::V1 => self.v[0],
            Symbol::V2 => self.v[1],
        }
    }

    pub fn set(&mut self, s: Symbol, value: C64) {
        match s {
            Symbol::U1 => self.u[0] = value,
            Symbol::U2 => self.u[1] = value,
            Symbol::V1 => self.v[0] = value,
            Symbol::V2 => self.v[1] = value,
        }
    }

    /// Symbol of receiver `rx` sent by transmitter `tx`.
    pub fn message(&self, rx: usize, tx: usize) -> C64 {
        if rx == 0 {
            self.u[tx]
        } else {
            self.v[tx]
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.u[0] * k, self.u[1] * k, self.v[0] * k, self.v[1] * k)
    }

    /// Exchange u and v.
    pub fn swap_roles(&self) -> Self {
        SymbolVector {
            u: self.v,
            v: self.u,
        }
    }
}

/// Transmit signals `x[t][tx]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmitSignals {
    pub x: [[C64; 2]; SLOTS],
}

impl TransmitSignals {
    pub fn zeros() -> Self {
        TransmitSignals {
            x: [[C64::new(0.0, 0.0); 2]; SLOTS],
        }
    }

    pub fn combine(&self, a: C64, other: &TransmitSignals, b: C64) -> Self {
        let mut out = Self::zeros();
        for t in 0..SLOTS {
            for j in 0..2 {
                out.x[t][j] = a * self.x[t][j] + b * other.x[t][j];
            }
        }
        out
    }
}

/// Received signals and the noise that went into them, `y[rx][t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReceivedBlock {
    pub y: [[C64; SLOTS]; 2],
    pub noise: [[C64; SLOTS]; 2],
    pub noise_power: f64,
    pub noise_seed: u64,
}

impl ReceivedBlock {
    /// The same block with the recorded noise removed.
    pub fn noiseless(&self) -> ReceivedBlock {
        let mut y = self.y;
        for (row, noise) in y.iter_mut().zip(self.noise.iter()) {
            for (v, n) in row.iter_mut().zip(noise.iter()) {
                *v -= n;
            }
        }
        ReceivedBlock {
            y,
            noise: [[C64::new(0.0, 0.0); SLOTS]; 2],
            noise_power: 0.0,
            noise_seed: self.noise_seed,
        }
    }
}

/// Pass `x` through the channel, adding CN(0, noise_power) noise drawn from
/// `noise_seed`. `noise_power == 0` gives the noiseless output.
pub fn apply_channel(
    x: &TransmitSignals,
    channel: &ChannelRealization,
    noise_power: f64,
    noise_seed: u64,
) -> Result<ReceivedBlock, ChannelError> {
    if !(noise_power.is_finite() && noise_power >= 0.0) {
        return Err(ChannelError::InvalidNoisePower(noise_power));
    }
    let mut noise = [[C64::new(0.0, 0.0); SLOTS]; 2];
    if noise_power > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
        let std_per_dim = (noise_power / 2.0).sqrt();
        for t in 0..SLOTS {
            for row in noise.iter_mut() {
                row[t] = complex_gaussian(&mut rng, std_per_dim);
            }
        }
    }
    let mut y = [[C64::new(0.0, 0.0); SLOTS]; 2];
    for (rx, row) in y.iter_mut().enumerate() {
        for (t, out) in row.iter_mut().enumerate() {
            *out = channel.coef(rx, 0, t) * x.x[t][0]
                + channel.coef(rx, 1, t) * x.x[t][1]
                + noise[rx][t];
        }
    }
    Ok(ReceivedBlock {
        y,
        noise,
        noise_power,
        noise_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    /// Straight-line evaluation of the channel law, kept independent of
    /// `apply_channel`'s loop structure.
    fn oracle_y(h: &ChannelRealization, x: &TransmitSignals) -> [[C64; 3]; 2] {
        let y = |i: usize, t: usize| h.h[t][i][0] * x.x[t][0] + h.h[t][i][1] * x.x[t][1];
        [[y(0, 0), y(0, 1), y(0, 2)], [y(1, 0), y(1, 1), y(1, 2)]]
    }

    #[test]
    fn draw_is_deterministic() {
        let a = draw_channel(42, 1e-6).unwrap();
        let b = draw_channel(42, 1e-6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, draw_channel(43, 1e-6).unwrap());
        assert!(a.min_magnitude() >= 1e-6);
    }

    #[test]
    fn floor_is_validated() {
        assert_eq!(draw_channel(1, 1.0), Err(ChannelError::InvalidFloor(1.0)));
        assert!(draw_channel(1, 0.0).is_err());
        assert!(draw_channel(1, f64::NAN).is_err());
    }

    #[test]
    fn floor_forces_resampling() {
        // A floor near 1 resamples most draws; every survivor respects it.
        for seed in 0..200 {
            assert!(draw_channel(seed, 0.9).unwrap().min_magnitude() >= 0.9);
        }
    }

    #[test]
    fn unit_average_power() {
        let mut acc = 0.0;
        let draws = 100_000;
        for seed in 0..draws {
            let h = draw_channel(seed, DEFAULT_EPS).unwrap();
            acc += h.coef(0, 0, 0).norm_sqr();
        }
        let mean = acc / draws as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean |h|^2 = {mean}");
    }

    #[test]
    fn sum_of_inputs_on_identity_channel() {
        let s = SymbolVector::random(5);
        let mut x = TransmitSignals::zeros();
        x.x[0] = [s.u[0] + s.v[0], s.u[1] + s.v[1]];
        let rb = apply_channel(&x, &ChannelRealization::identity(), 0.0, 0).unwrap();
        assert_eq!(rb.y[0][0], s.u[0] + s.u[1] + s.v[0] + s.v[1]);
    }

    #[test]
    fn zero_input_zero_output() {
        let h = draw_channel(3, DEFAULT_EPS).unwrap();
        let rb = apply_channel(&TransmitSignals::zeros(), &h, 0.0, 9).unwrap();
        assert!(rb.y.iter().flatten().all(|y| *y == c(0.0)));
    }

    #[test]
    fn matches_straight_line_oracle() {
        let h = draw_channel(7, DEFAULT_EPS).unwrap();
        let s = SymbolVector::random(70);
        let mut x = TransmitSignals::zeros();
        for t in 0..3 {
            x.x[t] = [
                s.u[0] * (t as f64 + 1.0) + s.v[0],
                s.u[1] - s.v[1] * t as f64,
            ];
        }
        let rb = apply_channel(&x, &h, 0.0, 0).unwrap();
        let want = oracle_y(&h, &x);
        for i in 0..2 {
            for t in 0..3 {
                assert!((rb.y[i][t] - want[i][t]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn noise_is_recorded_and_reproducible() {
        let h = draw_channel(11, DEFAULT_EPS).unwrap();
        let mut x = TransmitSignals::zeros();
        x.x[1] = [c(1.0), c(-1.0)];
        let a = apply_channel(&x, &h, 0.5, 77).unwrap();
        let b = apply_channel(&x, &h, 0.5, 77).unwrap();
        assert_eq!(a, b);
        let clean = apply_channel(&x, &h, 0.0, 77).unwrap();
        let stripped = a.noiseless();
        for i in 0..2 {
            for t in 0..3 {
                assert!((stripped.y[i][t] - clean.y[i][t]).norm() < 1e-15);
            }
        }
        assert!(apply_channel(&x, &h, -1.0, 0).is_err());
    }

    #[test]
    fn noise_variance() {
        let h = ChannelRealization::identity();
        let x = TransmitSignals::zeros();
        let mut acc = 0.0;
        let n = 20_000;
        for seed in 0..n {
            let rb = apply_channel(&x, &h, 2.0, seed).unwrap();
            acc += rb.noise.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
        }
        let var = acc / (6 * n) as f64;
        assert!((var - 2.0).abs() < 0.05, "noise variance {var}");
    }

    #[test]
    fn json_round_trip() {
        let h = draw_channel(42, DEFAULT_EPS).unwrap();
        let s = h.to_json();
        assert!(s.starts_with("{\"seed\":42,\"eps\":1e-6,\"h\":[[["));
        let back = ChannelRealization::from_json(&s).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn symbols_have_unit_energy() {
        let s = SymbolVector::random(1);
        for sym in Symbol::ALL {
            assert!((s.get(sym).norm_sqr() - 1.0).abs() < 1e-12);
            assert_eq!(Symbol::new(sym.receiver(), sym.transmitter()), sym);
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(1, 0, 0);
        assert_ne!(a, derive_seed(1, 1, 0));
        assert_ne!(a, derive_seed(1, 0, 1));
        assert_ne!(a, derive_seed(2, 0, 0));
        assert_eq!(a, derive_seed(1, 0, 0));
    }
}
