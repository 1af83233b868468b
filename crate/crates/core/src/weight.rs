//! Scheduling weights.
//!
//! A pair's weight trades backlog drained against interference debt
//! incurred: `w = q r - z p g`. Positive weight means transmitting helps
//! the drift objective; the schedulers only ever activate nonnegative
//! weights.

/// Weight of a single pair given its backlog, achievable rate, the shared
/// virtual queue, transmit power, and interference gain.
pub fn weight(q: f64, r: f64, z: f64, p: f64, g: f64) -> f64 {
    q * r - z * p * g
}

/// Weights for all pairs in a slot.
pub fn compute_weights(q: &[f64], r: &[f64], z: f64, p: f64, g: &[f64]) -> Vec<f64> {
    debug_assert!(q.len() == r.len() && q.len() == g.len());
    q.iter()
        .zip(r)
        .zip(g)
        .map(|((&qi, &ri), &gi)| weight(qi, ri, z, p, gi))
        .collect()
}
