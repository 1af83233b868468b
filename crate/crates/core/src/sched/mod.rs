//! Slot schedulers.
//!
//! One transmission opportunity per slot, resolved either by a genie that
//! sees every weight (`centralized`), by mini-slot contention with a
//! weight-to-slot mapping (`cads`), or by per-pair randomized persistence
//! (`irds`).

pub mod cads;
pub mod centralized;
pub mod irds;
pub mod threshold_opt;

use serde::{Deserialize, Serialize};

/// Why a slot ended the way it did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionCause {
    /// A single winner transmits.
    Scheduled,
    /// Every pair had negative weight; nobody wanted the slot.
    IdleAllNegative,
    /// Two or more pairs signalled in the same earliest mini-slot.
    IdleCollision,
    /// No pair entered contention.
    IdleNoContender,
    /// Nonnegative weights existed but all violated the instantaneous
    /// interference cap.
    IdleInstantaneousLimit,
}

impl DecisionCause {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecisionCause::Scheduled => "scheduled",
            DecisionCause::IdleAllNegative => "idle-all-negative",
            DecisionCause::IdleCollision => "idle-collision",
            DecisionCause::IdleNoContender => "idle-no-contender",
            DecisionCause::IdleInstantaneousLimit => "idle-instantaneous-limit",
        }
    }
}

/// Outcome of one slot's scheduling step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDecision {
    pub winner: Option<usize>,
    pub cause: DecisionCause,
    /// Mini-slot each pair signalled in (`m + 1` means abstained); only
    /// contention schedulers fill this in.
    pub contention_slots: Option<Vec<usize>>,
    /// Fraction of the slot left for data: `1 - m tau` under contention,
    /// 1.0 otherwise.
    pub effective_fraction: f64,
}

impl ScheduleDecision {
    pub fn idle(cause: DecisionCause, effective_fraction: f64) -> Self {
        ScheduleDecision { winner: None, cause, contention_slots: None, effective_fraction }
    }
}
