//! Real and virtual queue recursions.
//!
//! Real queues track per-pair backlog in nats. The virtual queue turns the
//! average interference budget into a backlog: it grows by the interference
//! actually inflicted in a slot and drains by `gamma` per slot, so keeping
//! it stable keeps long-run interference within budget.

use serde::{Deserialize, Serialize};

/// Backlog of one pair, in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairQueue(pub f64);

/// Interference debt accumulated against the average budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VirtualQueue(pub f64);

/// `q(t+1) = [q(t) - served]+ + admitted`. Service applies to the backlog
/// present at the slot start; the slot's own arrivals are not servable.
pub fn update_real_queue(q: f64, served: f64, admitted: f64) -> f64 {
    debug_assert!(q >= 0.0 && served >= 0.0 && admitted >= 0.0);
    (q - served).max(0.0) + admitted
}

/// `z(t+1) = [z(t) - gamma + interference]+`. An infinite budget pins the
/// virtual queue at zero.
pub fn update_virtual_queue(z: f64, gamma: f64, interference: f64) -> f64 {
    debug_assert!(z >= 0.0 && gamma >= 0.0 && interference >= 0.0);
    if gamma.is_infinite() {
        return 0.0;
    }
    (z - gamma + interference).max(0.0)
}

impl PairQueue {
    pub fn update(&mut self, served: f64, admitted: f64) {
        self.0 = update_real_queue(self.0, served, admitted);
    }
}

impl VirtualQueue {
    pub fn update(&mut self, gamma: f64, interference: f64) {
        self.0 = update_virtual_queue(self.0, gamma, interference);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn serves_then_admits() {
        assert_eq!(update_real_queue(5.0, 2.0, 3.0), 6.0);
    }

    #[test]
    fn overdraining_clamps_before_admission() {
        assert_eq!(update_real_queue(1.0, 5.0, 2.0), 2.0);
    }

    #[test]
    fn virtual_queue_tracks_budget() {
        assert_eq!(update_virtual_queue(0.0, 1.0, 2.5), 1.5);
        assert_eq!(update_virtual_queue(1.5, 1.0, 0.0), 0.5);
        assert_eq!(update_virtual_queue(0.5, 1.0, 0.0), 0.0);
    }

    #[test]
    fn infinite_budget_pins_zero() {
        assert_eq!(update_virtual_queue(0.0, f64::INFINITY, 123.0), 0.0);
    }

    #[test]
    fn idle_system_drains_in_bounded_time() {
        // With no interference, z hits zero within ceil(z0 / gamma) slots.
        let (z0, gamma) = (10.3, 0.4);
        let mut z = z0;
        let mut slots = 0;
        while z > 0.0 {
            z = update_virtual_queue(z, gamma, 0.0);
            slots += 1;
        }
        assert_eq!(slots, (z0 / gamma).ceil() as u32);
    }

    proptest! {
        #[test]
        fn queues_never_go_negative(
            q in 0.0..1e6f64, served in 0.0..1e6f64, admitted in 0.0..1e6f64,
            z in 0.0..1e6f64, gamma in 0.0..1e3f64, interference in 0.0..1e6f64,
        ) {
            prop_assert!(update_real_queue(q, served, admitted) >= 0.0);
            prop_assert!(update_virtual_queue(z, gamma, interference) >= 0.0);
        }

        #[test]
        fn admission_is_additive(q in 0.0..1e6f64, served in 0.0..1e6f64, a in 0.0..1e4f64) {
            let base = update_real_queue(q, served, 0.0);
            prop_assert_eq!(update_real_queue(q, served, a), base + a);
        }
    }
}
