//! Admission control.
//!
//! Each pair admits `A = argmax_{0 <= x <= a_max} { v U(x) - Q x }` every
//! slot: the marginal utility of new traffic, scaled by `v`, is traded
//! against the current backlog. For the log utility this has a closed form.

use crate::config::UtilityKind;

/// Concave utility of a long-run admitted rate.
pub fn utility(kind: UtilityKind, x: f64) -> f64 {
    match kind {
        UtilityKind::Log => (1.0 + x).ln(),
    }
}

/// Admitted traffic for one pair in one slot.
///
/// For `U(x) = ln(1 + x)` the unconstrained maximizer of `v U(x) - q x` is
/// `v/q - 1`, clamped to `[0, a_max]`. An empty queue admits the cap.
pub fn flow_control(q: f64, v: f64, kind: UtilityKind, a_max: f64) -> f64 {
    debug_assert!(q >= 0.0 && v > 0.0 && a_max > 0.0);
    match kind {
        UtilityKind::Log => {
            if q == 0.0 {
                return a_max;
            }
            (v / q - 1.0).clamp(0.0, a_max)
        }
    }
}
