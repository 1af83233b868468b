//! Block-fading channel model.
//!
//! Every device pair sees two gains per slot: a direct gain `h` on its own
//! link and an interference gain `g` toward the protected receiver. Gains
//! are redrawn independently each slot (block fading) and are independent
//! across pairs. The default model is Rayleigh fading, i.e. exponentially
//! distributed power gains.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

/// Marginal distribution of a single power gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GainDistribution {
    /// Exponential with the given mean (Rayleigh fading in power units).
    Exponential { mean: f64 },
    /// Degenerate point mass, mostly useful in tests.
    Constant { value: f64 },
}

impl GainDistribution {
    pub fn mean(&self) -> f64 {
        match *self {
            GainDistribution::Exponential { mean } => mean,
            GainDistribution::Constant { value } => value,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            GainDistribution::Exponential { mean } => {
                // Exp::new takes the rate parameter.
                Exp::new(1.0 / mean).expect("positive mean").sample(rng)
            }
            GainDistribution::Constant { value } => value,
        }
    }
}

/// Per-pair gain distributions for a network of `n` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub direct: Vec<GainDistribution>,
    pub interference: Vec<GainDistribution>,
}

impl ChannelModel {
    /// Identical marginals for every pair.
    pub fn iid(n: usize, direct_mean: f64, interference_mean: f64) -> Self {
        ChannelModel {
            direct: vec![GainDistribution::Exponential { mean: direct_mean }; n],
            interference: vec![GainDistribution::Exponential { mean: interference_mean }; n],
        }
    }

    /// Pair count.
    pub fn n(&self) -> usize {
        debug_assert_eq!(self.direct.len(), self.interference.len());
        self.direct.len()
    }

    pub fn is_iid(&self) -> bool {
        self.direct.windows(2).all(|w| w[0] == w[1])
            && self.interference.windows(2).all(|w| w[0] == w[1])
    }

    /// Draw one slot worth of gains. Draw order is fixed (h_1..h_n, then
    /// g_1..g_n) so that traces are reproducible from the seed alone.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, slot: u64) -> ChannelState {
        let h = self.direct.iter().map(|d| d.sample(rng)).collect();
        let g = self.interference.iter().map(|d| d.sample(rng)).collect();
        ChannelState { slot, h, g }
    }
}

/// Realized gains for one slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelState {
    pub slot: u64,
    /// Direct link power gains, one per pair.
    pub h: Vec<f64>,
    /// Interference power gains toward the protected receiver.
    pub g: Vec<f64>,
}

/// Achievable rate of a pair transmitting alone at power `p` over noise
/// power `n0`, in nats per channel use: `ln(1 + p h / n0)`.
pub fn rate(h: f64, p: f64, n0: f64) -> f64 {
    debug_assert!(h >= 0.0 && p >= 0.0 && n0 > 0.0);
    (1.0 + p * h / n0).ln()
}
