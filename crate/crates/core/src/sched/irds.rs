//! Fully distributed randomized scheduling.
//!
//! Each pair flips two private coins per slot: an attempt coin with
//! probability `1/n` and a persistence coin with probability
//! `sigmoid(w_i)`. A pair starts transmitting when it is the sole
//! attempter, nobody else transmitted last slot, and its persistence coin
//! came up; it keeps transmitting across slots while the persistence coin
//! holds and it never won a clean attempt round. No coordination means
//! several pairs can transmit at once; all of them accrue rate and
//! interference.

use rand::Rng;

/// Transmission indicators carried across slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrdsState {
    pub active: Vec<bool>,
}

impl IrdsState {
    pub fn new(n: usize) -> Self {
        IrdsState { active: vec![false; n] }
    }
}

/// Numerically safe `e^w / (e^w + 1)`.
fn persistence_probability(w: f64) -> f64 {
    if w >= 0.0 {
        1.0 / (1.0 + (-w).exp())
    } else {
        let e = w.exp();
        e / (1.0 + e)
    }
}

/// One slot of the randomized scheduler. Draw order is fixed: attempt
/// coins for all pairs, then persistence coins for all pairs.
pub fn irds_step<R: Rng + ?Sized>(
    weights: &[f64],
    prev: &IrdsState,
    rng: &mut R,
) -> IrdsState {
    let n = weights.len();
    debug_assert_eq!(prev.active.len(), n);
    let attempt_p = 1.0 / n as f64;
    let attempts: Vec<bool> = (0..n).map(|_| rng.gen_bool(attempt_p)).collect();
    let persists: Vec<bool> = weights
        .iter()
        .map(|&w| rng.gen_bool(persistence_probability(w)))
        .collect();

    let prev_total = prev.active.iter().filter(|&&a| a).count();
    let attempt_total = attempts.iter().filter(|&&a| a).count();

    let mut active = vec![false; n];
    for i in 0..n {
        let sole_attempter = attempts[i] && attempt_total == 1;
        let others_were_silent = prev_total - prev.active[i] as usize == 0;
        if sole_attempter && others_were_silent && persists[i] {
            active[i] = true;
        } else if !sole_attempter && persists[i] {
            active[i] = prev.active[i];
        }
    }
    IrdsState { active }
}
