//! Numerical optimization of contention thresholds.
//!
//! Thresholds are searched in quantile space: interior knots
//! `1 > c_1 > ... > c_{m-1} > 0` carve `[0, 1]` into `m` bands, and a
//! contending pair whose conditional weight quantile falls in band `s`
//! signals in mini-slot `s`. Uniform knots `c_j = (m - j)/m` reproduce the
//! quantile-band mapping; the optimizer tilts them to trade collision
//! probability in the top bands against resolution of the best weights.
//!
//! The objective is a Monte Carlo estimate of the served weight per slot,
//! `E[w_winner 1{success}] (1 - m tau)`, under symmetric pairs. A fixed
//! trial set (common random numbers) keeps the coordinate ascent stable.

use rand::Rng;

use super::cads::{ThresholdMap, WeightCdf};
use crate::channel::ChannelModel;
use crate::config::SimConfig;
use crate::sched::cads::estimate_weight_cdf;

const RESTARTS: usize = 3;
const MAX_SWEEPS: usize = 3;
const GRID: usize = 9;
pub const DEFAULT_TRIALS: usize = 10_000;

/// Precomputed contention outcomes: per trial only the top two quantiles
/// and the winner weight matter, because bands are monotone in the
/// quantile and a slot succeeds exactly when the top two quantiles fall in
/// different bands.
pub struct ContentionTrials {
    /// `(u_second, u_top, w_top)`; `u_second < 0` encodes a lone contender.
    trials: Vec<(f64, f64, f64)>,
    /// Trials with no contender at all (still count toward the mean).
    empty: usize,
    sorted_u1: Vec<f64>,
    sorted_u2: Vec<f64>,
}

impl ContentionTrials {
    pub fn draw<R: Rng + ?Sized>(
        n_pairs: usize,
        prob_positive: f64,
        cdf: &WeightCdf,
        count: usize,
        rng: &mut R,
    ) -> Self {
        let mut trials = Vec::with_capacity(count);
        let mut empty = 0usize;
        for _ in 0..count {
            let mut u1 = -1.0f64;
            let mut u2 = -1.0f64;
            for _ in 0..n_pairs {
                if prob_positive < 1.0 && !rng.gen_bool(prob_positive) {
                    continue;
                }
                let u: f64 = rng.gen();
                if u > u1 {
                    u2 = u1;
                    u1 = u;
                } else if u > u2 {
                    u2 = u;
                }
            }
            if u1 < 0.0 {
                empty += 1;
            } else {
                trials.push((u2, u1, cdf.quantile(u1)));
            }
        }
        let mut sorted_u1: Vec<f64> = trials.iter().map(|t| t.1).collect();
        let mut sorted_u2: Vec<f64> = trials.iter().filter(|t| t.0 >= 0.0).map(|t| t.0).collect();
        sorted_u1.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted_u2.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ContentionTrials { trials, empty, sorted_u1, sorted_u2 }
    }

    pub fn len(&self) -> usize {
        self.trials.len() + self.empty
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Mean served weight per slot for the given interior knots.
    pub fn objective(&self, knots: &[f64], data_fraction: f64) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let mut total = 0.0;
        for &(u2, u1, w1) in &self.trials {
            if u2 < 0.0 {
                total += w1;
                continue;
            }
            // Success iff some knot separates the top two quantiles.
            let above_u2 = knots.partition_point(|&c| c > u2);
            let above_u1 = knots.partition_point(|&c| c > u1);
            if above_u1 < above_u2 {
                total += w1;
            }
        }
        data_fraction * total / self.len() as f64
    }

    /// Whether any trial's outcome can depend on a knot inside `(lo, hi)`.
    fn interval_active(&self, lo: f64, hi: f64) -> bool {
        let in_range = |v: &Vec<f64>| {
            v.partition_point(|&u| u < hi) > v.partition_point(|&u| u <= lo)
        };
        in_range(&self.sorted_u1) || in_range(&self.sorted_u2)
    }
}

pub fn uniform_knots(m: usize) -> Vec<f64> {
    (1..m).map(|j| (m - j) as f64 / m as f64).collect()
}

fn random_knots<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    let mut knots: Vec<f64> = (1..m).map(|_| rng.gen::<f64>()).collect();
    knots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    knots
}

fn ascend(trials: &ContentionTrials, knots: &mut Vec<f64>, data_fraction: f64) -> f64 {
    let mut best = trials.objective(knots, data_fraction);
    for _ in 0..MAX_SWEEPS {
        let sweep_start = best;
        for j in 0..knots.len() {
            let hi = if j == 0 { 1.0 } else { knots[j - 1] };
            let lo = if j + 1 == knots.len() { 0.0 } else { knots[j + 1] };
            if !trials.interval_active(lo, hi) {
                continue;
            }
            let current = knots[j];
            let mut best_pos = current;
            for t in 1..=GRID {
                let cand = lo + (hi - lo) * t as f64 / (GRID + 1) as f64;
                knots[j] = cand;
                let obj = trials.objective(knots, data_fraction);
                if obj > best {
                    best = obj;
                    best_pos = cand;
                }
            }
            knots[j] = best_pos;
        }
        if best - sweep_start <= 1e-6 * best.abs().max(1e-12) {
            break;
        }
    }
    best
}

/// Search for slot thresholds that maximize served weight under the
/// current backlog state. Pairs are assumed symmetric: one conditional
/// weight CDF is estimated by pooling fresh draws across pairs, and the
/// resulting thresholds are shared. Falls back to the quantile-band
/// (uniform) knots on ties and to an all-abstain map when no weight mass
/// is positive.
pub fn optimize_thresholds<R: Rng + ?Sized>(
    model: &ChannelModel,
    q: &[f64],
    z: f64,
    cfg: &SimConfig,
    rng: &mut R,
) -> ThresholdMap {
    debug_assert_eq!(q.len(), model.n());
    let n = model.n();
    let m = cfg.m;

    // Pooled conditional weight distribution across pairs.
    let mut positives = Vec::new();
    let mut total = 0usize;
    for (pair, &qi) in q.iter().enumerate() {
        let c = estimate_weight_cdf(model, pair, qi, z, cfg.p, cfg.n0, cfg.cdf_samples, rng);
        total += cfg.cdf_samples;
        if let Some(s) = c.samples() {
            positives.extend_from_slice(s);
        }
    }
    if positives.is_empty() {
        return ThresholdMap::all_abstain(m);
    }
    let prob_positive = positives.len() as f64 / total as f64;
    let pooled = WeightCdf::from_positive_samples(positives, prob_positive);

    let trials =
        ContentionTrials::draw(n, prob_positive, &pooled, DEFAULT_TRIALS, rng);
    let data_fraction = cfg.data_fraction();

    let mut best_knots = uniform_knots(m);
    let mut best = ascend(&trials, &mut best_knots, data_fraction);
    for _ in 1..RESTARTS {
        let mut knots = random_knots(m, rng);
        let obj = ascend(&trials, &mut knots, data_fraction);
        if obj > best {
            best = obj;
            best_knots = knots;
        }
    }
    ThresholdMap::from_quantile_knots(best_knots, &pooled)
}
