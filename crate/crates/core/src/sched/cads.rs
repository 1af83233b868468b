//! Mini-slot contention scheduling.
//!
//! A slot opens with `m` contention mini-slots of length `tau`. Each pair
//! maps its weight to a mini-slot index (higher weight, earlier slot) and
//! signals there; the earliest signal wins the remaining `1 - m tau` of
//! the slot if it is unique, and collides the whole slot otherwise.
//! Negative weights abstain by "choosing" slot `m + 1`.
//!
//! Three mappings are provided: quantile bands of the pair's own
//! conditional weight distribution (uniform occupancy by construction),
//! fixed-width bands of `[0, w_max]`, and arbitrary descending thresholds
//! (the optimizer in `threshold_opt` produces these).

use rand::Rng;

use super::{DecisionCause, ScheduleDecision};
use crate::channel::{rate, ChannelModel};
use crate::weight::weight;

// ---------------------------------------------------------------------------
// Conditional weight distribution
// ---------------------------------------------------------------------------

/// Distribution of a pair's weight conditioned on it being positive,
/// either as an empirical sample or as an interpolated table of a known
/// CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightCdf {
    repr: Repr,
    /// Probability that the (unconditioned) weight is positive.
    pub prob_positive: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    /// Sorted positive samples.
    Samples(Vec<f64>),
    /// Piecewise-linear CDF through `(xs[i], fs[i])` knots.
    Table { xs: Vec<f64>, fs: Vec<f64> },
}

impl WeightCdf {
    pub fn from_positive_samples(mut samples: Vec<f64>, prob_positive: f64) -> Self {
        debug_assert!(samples.iter().all(|&s| s > 0.0));
        debug_assert!((0.0..=1.0).contains(&prob_positive));
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        WeightCdf { repr: Repr::Samples(samples), prob_positive }
    }

    /// Build from explicit CDF knots; `fs` must rise from 0 to 1.
    pub fn from_table(xs: Vec<f64>, fs: Vec<f64>, prob_positive: f64) -> Self {
        assert_eq!(xs.len(), fs.len());
        assert!(xs.len() >= 2);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        assert!(fs.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(fs[0], 0.0);
        assert_eq!(*fs.last().unwrap(), 1.0);
        WeightCdf { repr: Repr::Table { xs, fs }, prob_positive }
    }

    /// No positive mass observed; holders of such a CDF abstain.
    pub fn degenerate() -> Self {
        WeightCdf { repr: Repr::Samples(Vec::new()), prob_positive: 0.0 }
    }

    pub fn is_degenerate(&self) -> bool {
        match &self.repr {
            Repr::Samples(s) => s.is_empty(),
            Repr::Table { .. } => false,
        }
    }

    /// Conditional CDF value `P(W <= x | W > 0)`.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Samples(s) => {
                if s.is_empty() {
                    return 0.0;
                }
                let below = s.partition_point(|&v| v <= x);
                below as f64 / s.len() as f64
            }
            Repr::Table { xs, fs } => {
                if x <= xs[0] {
                    return 0.0;
                }
                if x >= *xs.last().unwrap() {
                    return 1.0;
                }
                let hi = xs.partition_point(|&v| v <= x);
                let (x0, x1) = (xs[hi - 1], xs[hi]);
                let (f0, f1) = (fs[hi - 1], fs[hi]);
                f0 + (f1 - f0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Inverse of `eval`; `quantile(0)` is pinned to the contention floor 0.
    pub fn quantile(&self, q: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&q));
        match &self.repr {
            Repr::Samples(s) => {
                if s.is_empty() || q == 0.0 {
                    return 0.0;
                }
                let idx = ((q * s.len() as f64).ceil() as usize).clamp(1, s.len());
                s[idx - 1]
            }
            Repr::Table { xs, fs } => {
                if q <= fs[0] {
                    return xs[0];
                }
                if q >= *fs.last().unwrap() {
                    return *xs.last().unwrap();
                }
                let hi = fs.partition_point(|&v| v < q);
                let (f0, f1) = (fs[hi - 1], fs[hi]);
                if f1 == f0 {
                    return xs[hi];
                }
                xs[hi - 1] + (xs[hi] - xs[hi - 1]) * (q - f0) / (f1 - f0)
            }
        }
    }

    pub fn sample_count(&self) -> usize {
        match &self.repr {
            Repr::Samples(s) => s.len(),
            Repr::Table { xs, .. } => xs.len(),
        }
    }

    /// Sorted positive samples, when backed by an empirical estimate.
    pub fn samples(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Samples(s) => Some(s),
            Repr::Table { .. } => None,
        }
    }
}

/// Estimate the conditional weight CDF of one pair at the current backlog
/// state by redrawing its channel `samples` times. Pairs with no positive
/// mass get a degenerate CDF and abstain.
pub fn estimate_weight_cdf<R: Rng + ?Sized>(
    model: &ChannelModel,
    pair: usize,
    q: f64,
    z: f64,
    p: f64,
    n0: f64,
    samples: usize,
    rng: &mut R,
) -> WeightCdf {
    debug_assert!(pair < model.n());
    let mut positives = Vec::with_capacity(samples);
    for _ in 0..samples {
        let h = model.direct[pair].sample(rng);
        let g = model.interference[pair].sample(rng);
        let w = weight(q, rate(h, p, n0), z, p, g);
        if w > 0.0 {
            positives.push(w);
        }
    }
    if positives.is_empty() {
        return WeightCdf::degenerate();
    }
    let prob_positive = positives.len() as f64 / samples as f64;
    WeightCdf::from_positive_samples(positives, prob_positive)
}

// ---------------------------------------------------------------------------
// Weight-to-mini-slot mappings
// ---------------------------------------------------------------------------

/// Mini-slot for a quantile `u` in `[0, 1]`: slot `s` covers
/// `[(m - s)/m, (m - s + 1)/m)`, so the top of the distribution signals
/// first and occupancy is uniform when `u` is uniform.
pub fn slot_from_quantile(u: f64, m: usize) -> usize {
    debug_assert!((0.0..=1.0).contains(&u));
    let band = ((u * m as f64).floor() as usize).min(m);
    (m - band).max(1)
}

/// Quantile-band mapping through the pair's conditional weight CDF.
pub fn map_uniform(w: f64, cdf: &WeightCdf, m: usize) -> usize {
    if w < 0.0 || cdf.is_degenerate() {
        return m + 1;
    }
    slot_from_quantile(cdf.eval(w), m)
}

/// Fixed-width bands of `[0, w_max]`; weights at or above the cap signal
/// in the first mini-slot.
pub fn map_linear(w: f64, w_max: f64, m: usize) -> usize {
    debug_assert!(w_max > 0.0);
    if w < 0.0 {
        return m + 1;
    }
    if w >= w_max {
        return 1;
    }
    slot_from_quantile(w / w_max, m)
}

/// Explicit descending per-slot thresholds: slot `s` covers
/// `[thresholds[s-1], thresholds[s-2])` with an implicit `+inf` above the
/// first. Weights below the last threshold (or negative) abstain.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdMap {
    pub thresholds: Vec<f64>,
    /// Quantile positions the thresholds were derived from, when they came
    /// out of the optimizer; lets callers re-anchor them to a fresh CDF.
    pub quantile_knots: Option<Vec<f64>>,
}

impl ThresholdMap {
    pub fn new(thresholds: Vec<f64>) -> Self {
        assert!(!thresholds.is_empty());
        assert!(
            thresholds.windows(2).all(|w| w[0] >= w[1]),
            "thresholds must be descending"
        );
        ThresholdMap { thresholds, quantile_knots: None }
    }

    /// Map that never contends.
    pub fn all_abstain(m: usize) -> Self {
        ThresholdMap { thresholds: vec![f64::INFINITY; m], quantile_knots: None }
    }

    pub fn m(&self) -> usize {
        self.thresholds.len()
    }

    /// Anchor interior quantile knots `1 > c_1 > ... > c_{m-1} > 0` to a
    /// CDF, giving weight-space thresholds with `thresholds[m-1] = 0`.
    pub fn from_quantile_knots(knots: Vec<f64>, cdf: &WeightCdf) -> Self {
        let mut thresholds: Vec<f64> = knots.iter().map(|&c| cdf.quantile(c)).collect();
        thresholds.push(0.0);
        // Interpolated quantiles of a finite sample may invert strict
        // ordering of very close knots; repair monotonicity.
        for i in 1..thresholds.len() {
            if thresholds[i] > thresholds[i - 1] {
                thresholds[i] = thresholds[i - 1];
            }
        }
        ThresholdMap { thresholds, quantile_knots: Some(knots) }
    }
}

pub fn map_threshold(w: f64, map: &ThresholdMap) -> usize {
    let m = map.m();
    if w < 0.0 {
        return m + 1;
    }
    let idx = map.thresholds.partition_point(|&a| a > w);
    if idx < m {
        idx + 1
    } else if w >= map.thresholds[m - 1] {
        m
    } else {
        m + 1
    }
}

// ---------------------------------------------------------------------------
// Contention resolution
// ---------------------------------------------------------------------------

/// Resolve one contention round. `slots[i]` is pair `i`'s chosen mini-slot
/// (`m + 1` = abstain). The earliest unique signal wins; a shared earliest
/// mini-slot wastes the slot.
pub fn cads_contend(slots: &[usize], m: usize, effective_fraction: f64) -> ScheduleDecision {
    debug_assert!(slots.iter().all(|&s| (1..=m + 1).contains(&s)));
    let mut earliest = m + 1;
    let mut winner = None;
    let mut count = 0usize;
    for (i, &s) in slots.iter().enumerate() {
        if s > m {
            continue;
        }
        if s < earliest {
            earliest = s;
            winner = Some(i);
            count = 1;
        } else if s == earliest {
            count += 1;
        }
    }
    let (winner, cause) = match count {
        0 => (None, DecisionCause::IdleNoContender),
        1 => (winner, DecisionCause::Scheduled),
        _ => (None, DecisionCause::IdleCollision),
    };
    ScheduleDecision {
        winner,
        cause,
        contention_slots: Some(slots.to_vec()),
        effective_fraction,
    }
}

/// Scheduling efficiency lost to imperfect weight ordering, estimated
/// from `(winner weight, best weight, success)` slot records:
/// `1 - sum(winner) / sum(best)` over successful slots, clamped to [0, 1].
/// Returns `None` when no slot succeeded.
pub fn estimate_beta(trace: &[(f64, f64, bool)]) -> Option<f64> {
    let (mut won, mut best) = (0.0, 0.0);
    let mut successes = 0usize;
    for &(w_winner, w_max, success) in trace {
        if success {
            won += w_winner;
            best += w_max;
            successes += 1;
        }
    }
    if successes == 0 || best <= 0.0 {
        return None;
    }
    Some((1.0 - won / best).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::GainDistribution;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform01_cdf() -> WeightCdf {
        WeightCdf::from_table(vec![0.0, 1.0], vec![0.0, 1.0], 1.0)
    }

    #[test]
    fn quantile_bands_match_spec_points() {
        let cdf = uniform01_cdf();
        assert_eq!(map_uniform(0.8, &cdf, 4), 1); // F in [0.75, 1.0)
        assert_eq!(map_uniform(0.3, &cdf, 4), 3); // F in [0.25, 0.5)
        assert_eq!(map_uniform(-0.2, &cdf, 4), 5);
        assert_eq!(map_uniform(0.9999, &cdf, 4), 1);
        assert_eq!(map_uniform(0.0, &cdf, 4), 4);
    }

    #[test]
    fn linear_bands_match_spec_points() {
        assert_eq!(map_linear(9.0, 10.0, 5), 1); // [8, 10)
        assert_eq!(map_linear(7.0, 10.0, 5), 2); // [6, 8)
        assert_eq!(map_linear(12.0, 10.0, 5), 1); // clamped at the cap
        assert_eq!(map_linear(-0.1, 10.0, 5), 6);
        assert_eq!(map_linear(0.0, 10.0, 5), 5);
    }

    #[test]
    fn threshold_bands_match_spec_points() {
        let map = ThresholdMap::new(vec![2.0, 1.0, 0.0]);
        assert_eq!(map_threshold(1.5, &map), 2);
        assert_eq!(map_threshold(-1.0, &map), 4);
        assert_eq!(map_threshold(5.0, &map), 1);
        assert_eq!(map_threshold(0.5, &map), 3);
        assert_eq!(map_threshold(2.0, &map), 1); // band floors are inclusive
    }

    #[test]
    fn below_last_threshold_abstains() {
        let map = ThresholdMap::new(vec![2.0, 1.0, 0.5]);
        assert_eq!(map_threshold(0.2, &map), 4);
        assert_eq!(map_threshold(f64::INFINITY, &ThresholdMap::all_abstain(3)), 4);
    }

    #[test]
    fn contention_earliest_unique_wins() {
        let d = cads_contend(&[3, 1, 2], 4, 0.9);
        assert_eq!(d.winner, Some(1));
        assert_eq!(d.cause, DecisionCause::Scheduled);
        assert_eq!(d.effective_fraction, 0.9);
        assert_eq!(d.contention_slots, Some(vec![3, 1, 2]));
    }

    #[test]
    fn contention_collision_wastes_slot() {
        let d = cads_contend(&[1, 1, 2], 4, 0.9);
        assert_eq!(d.winner, None);
        assert_eq!(d.cause, DecisionCause::IdleCollision);
    }

    #[test]
    fn contention_no_contender() {
        let d = cads_contend(&[5, 5], 4, 0.9);
        assert_eq!(d.winner, None);
        assert_eq!(d.cause, DecisionCause::IdleNoContender);
    }

    #[test]
    fn later_collisions_do_not_matter() {
        let d = cads_contend(&[2, 3, 3], 4, 0.9);
        assert_eq!(d.winner, Some(0));
    }

    #[test]
    fn contention_is_permutation_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let n = rng.gen_range(1..8);
            let m = rng.gen_range(1..6);
            let slots: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=m + 1)).collect();
            let perm: Vec<usize> = {
                let mut p: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                p
            };
            let permuted: Vec<usize> = perm.iter().map(|&j| slots[j]).collect();
            let d0 = cads_contend(&slots, m, 1.0);
            let d1 = cads_contend(&permuted, m, 1.0);
            assert_eq!(d0.cause == DecisionCause::Scheduled, d1.cause == DecisionCause::Scheduled);
            if let (Some(w0), Some(w1)) = (d0.winner, d1.winner) {
                assert_eq!(slots[perm[w1]], slots[w0]);
                assert_eq!(perm[w1], w0, "winner identity must follow the permutation");
            }
        }
    }

    #[test]
    fn estimated_cdf_tracks_rate_distribution() {
        // With z = 0 and unit backlog the weight is exactly the rate, so
        // the estimate must approach F(r) = 1 - exp(-(e^r - 1)/2).
        let model = ChannelModel::iid(1, 2.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cdf = estimate_weight_cdf(&model, 0, 1.0, 0.0, 1.0, 1.0, 1_000_000, &mut rng);
        assert_eq!(cdf.prob_positive, 1.0);
        let analytic = |r: f64| 1.0 - (-((r.exp() - 1.0) / 2.0)).exp();
        let n = cdf.sample_count() as f64;
        let mut ks: f64 = 0.0;
        if let Repr::Samples(s) = &cdf.repr {
            for (i, &x) in s.iter().enumerate() {
                let f = analytic(x);
                ks = ks.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
            }
        } else {
            panic!("expected samples");
        }
        assert!(ks < 0.01, "Kolmogorov distance {ks}");
    }

    #[test]
    fn degenerate_cdf_abstains() {
        // Backlog 0 and positive debt keeps every weight nonpositive.
        let model = ChannelModel::iid(1, 2.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let cdf = estimate_weight_cdf(&model, 0, 0.0, 1.0, 1.0, 1.0, 1000, &mut rng);
        assert!(cdf.is_degenerate());
        assert_eq!(cdf.prob_positive, 0.0);
        assert_eq!(map_uniform(0.5, &cdf, 8), 9);
    }

    #[test]
    fn estimation_is_deterministic_in_seed() {
        let model = ChannelModel::iid(3, 2.0, 1.0);
        let a = estimate_weight_cdf(&model, 1, 7.0, 2.0, 1.0, 1.0, 500,
                                    &mut ChaCha8Rng::seed_from_u64(9));
        let b = estimate_weight_cdf(&model, 1, 7.0, 2.0, 1.0, 1.0, 500,
                                    &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn point_mass_weight_is_single_atom() {
        let model = ChannelModel {
            direct: vec![GainDistribution::Constant { value: std::f64::consts::E - 1.0 }],
            interference: vec![GainDistribution::Constant { value: 0.5 }],
        };
        // w = 2*1 - 1*0.5 = 1.5 deterministic.
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cdf = estimate_weight_cdf(&model, 0, 2.0, 1.0, 1.0, 1.0, 100, &mut rng);
        assert_eq!(cdf.prob_positive, 1.0);
        assert_eq!(cdf.eval(1.49), 0.0);
        assert_eq!(cdf.eval(1.5), 1.0);
        assert_eq!(cdf.quantile(1.0), 1.5);
    }

    #[test]
    fn quantile_inverts_eval_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let samples: Vec<f64> = (0..1000).map(|_| rng.gen_range(0.01..9.0)).collect();
        let cdf = WeightCdf::from_positive_samples(samples.clone(), 1.0);
        for &x in samples.iter().step_by(7) {
            assert_eq!(cdf.quantile(cdf.eval(x)), x);
        }
        // Monotone, with the right limits.
        assert_eq!(cdf.eval(f64::NEG_INFINITY), 0.0);
        assert_eq!(cdf.eval(f64::INFINITY), 1.0);
        let mut prev = -1.0;
        for i in 0..100 {
            let f = cdf.eval(i as f64 * 0.1);
            assert!(f >= prev);
            prev = f;
        }
    }

    #[test]
    fn quantile_thresholds_reproduce_uniform_mapping() {
        // Thresholds placed at the conditional quantiles (m-s)/m must make
        // the threshold mapping agree with the quantile-band mapping.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for m in [1usize, 2, 3, 5, 8, 13] {
            let samples: Vec<f64> = (0..677).map(|_| rng.gen_range(0.001..5.0)).collect();
            let cdf = WeightCdf::from_positive_samples(samples.clone(), 0.9);
            let knots: Vec<f64> = (1..m).map(|s| (m - s) as f64 / m as f64).collect();
            let tmap = ThresholdMap::from_quantile_knots(knots, &cdf);
            for &w in &samples {
                assert_eq!(
                    map_threshold(w, &tmap),
                    map_uniform(w, &cdf, m),
                    "w {w} m {m}"
                );
            }
        }
    }

    #[test]
    fn per_slot_frequencies_are_uniform() {
        // Exact-CDF quantile mapping must spread contenders uniformly.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5107);
        let cdf = uniform01_cdf();
        for m in [10usize, 200] {
            let draws = 1_000_000usize;
            let mut counts = vec![0u64; m + 2];
            for _ in 0..draws {
                counts[map_uniform(rng.gen::<f64>(), &cdf, m)] += 1;
            }
            assert_eq!(counts[0], 0);
            assert_eq!(counts[m + 1], 0);
            let expect = draws as f64 / m as f64;
            let se = (draws as f64 * (1.0 / m as f64) * (1.0 - 1.0 / m as f64)).sqrt();
            for s in 1..=m {
                let dev = (counts[s] as f64 - expect).abs();
                assert!(dev <= 3.0 * se, "slot {s} of {m}: count {} vs {expect}", counts[s]);
            }
        }
    }

    #[test]
    fn beta_from_exact_and_lossy_traces() {
        assert_eq!(estimate_beta(&[(2.0, 2.0, true), (3.0, 3.0, true)]), Some(0.0));
        assert_eq!(estimate_beta(&[(2.0, 2.0, true), (1.0, 2.0, true)]), Some(0.25));
        assert_eq!(estimate_beta(&[(1.0, 2.0, false)]), None);
        assert_eq!(estimate_beta(&[]), None);
    }
}
