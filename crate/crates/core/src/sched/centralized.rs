//! Genie max-weight scheduler.

use super::{DecisionCause, ScheduleDecision};

/// Pick the pair with the largest weight among those with nonnegative
/// weight and instantaneous interference `p g <= nu`. Ties go to the
/// lowest index. Idle slots record whether weights or the instantaneous
/// cap were to blame.
pub fn centralized_schedule(weights: &[f64], g: &[f64], p: f64, nu: f64) -> ScheduleDecision {
    debug_assert_eq!(weights.len(), g.len());
    let mut winner: Option<usize> = None;
    let mut best = f64::NEG_INFINITY;
    let mut any_nonnegative = false;
    for (i, (&w, &gi)) in weights.iter().zip(g).enumerate() {
        if w < 0.0 {
            continue;
        }
        any_nonnegative = true;
        if p * gi > nu {
            continue;
        }
        if w > best {
            best = w;
            winner = Some(i);
        }
    }
    match winner {
        Some(i) => ScheduleDecision {
            winner: Some(i),
            cause: DecisionCause::Scheduled,
            contention_slots: None,
            effective_fraction: 1.0,
        },
        None => {
            let cause = if any_nonnegative {
                DecisionCause::IdleInstantaneousLimit
            } else {
                DecisionCause::IdleAllNegative
            };
            ScheduleDecision::idle(cause, 1.0)
        }
    }
}
