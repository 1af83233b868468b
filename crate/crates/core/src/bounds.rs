//! Closed-form contention performance bounds.
//!
//! Under quantile-band contention with `n` symmetric pairs and `m`
//! mini-slots, the probability that the slot is won cleanly, conditioned
//! on the best contender sitting in mini-slot `k`, is
//!
//! ```text
//! p_k = n (m - k)^(n-1) / ((m - k + 1)^n - (m - k)^n)
//! ```
//!
//! with the convention `0^0 = 1`. Averaging `p_k` uniformly over slots and
//! discounting the contention overhead `m tau` and the weight-ordering
//! loss `beta` gives a guaranteed fraction `alpha` of the ideal served
//! weight. Two published scalings of the average are exposed; the
//! per-slot average (which stays in `[0, 1]`) is the default.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact `p_k` as a rational.
pub fn p_success_exact(n: u32, m: u32, k: u32) -> BigRational {
    assert!(n >= 1 && m >= 1 && (1..=m).contains(&k));
    let j = BigInt::from(m - k);
    let j1 = BigInt::from(m - k + 1);
    // 0^0 = 1 keeps the single-pair and last-slot cases meaningful.
    let num = BigInt::from(n) * j.pow(n - 1);
    let den = j1.pow(n) - j.pow(n);
    BigRational::new(num, den)
}

/// `p_k` in floating point.
pub fn p_success_given_slot(n: u32, m: u32, k: u32) -> f64 {
    let r = p_success_exact(n, m, k);
    rational_to_f64(&r)
}

fn rational_to_f64(r: &BigRational) -> f64 {
    // Good enough for the magnitudes involved here (denominators fit well
    // within f64 range for the supported n, m).
    let num: f64 = r.numer().to_string().parse().unwrap();
    let den: f64 = r.denom().to_string().parse().unwrap();
    num / den
}

/// Shape of the `p_k` sequence in `k`, evaluated exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceShape {
    pub nonincreasing: bool,
    /// All second differences `p_{k-1} - 2 p_k + p_{k+1}` are >= 0.
    pub second_differences_nonnegative: bool,
    /// All second differences are <= 0.
    pub second_differences_nonpositive: bool,
}

pub fn pk_sequence_shape(n: u32, m: u32) -> SequenceShape {
    let p: Vec<BigRational> = (1..=m).map(|k| p_success_exact(n, m, k)).collect();
    let nonincreasing = p.windows(2).all(|w| w[0] >= w[1]);
    let mut nonneg = true;
    let mut nonpos = true;
    for w in p.windows(3) {
        let second = &w[0] - BigRational::from(BigInt::from(2)) * &w[1] + &w[2];
        if second.is_negative() {
            nonneg = false;
        }
        if second.is_positive() {
            nonpos = false;
        }
    }
    SequenceShape {
        nonincreasing,
        second_differences_nonnegative: nonneg,
        second_differences_nonpositive: nonpos,
    }
}

/// True when the sequence is nonincreasing with nonincreasing steps
/// (second differences <= 0), the shape the bound derivation leans on.
/// Sequences shorter than three entries pass vacuously.
pub fn check_pk_sequence(n: u32, m: u32) -> bool {
    let shape = pk_sequence_shape(n, m);
    shape.nonincreasing && shape.second_differences_nonpositive
}

/// Which scaling of the slot-success average to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaForm {
    /// `(1 - m tau)(1 - beta) (1/m) sum_k p_k`; stays within [0, 1].
    SlotAveraged,
    /// Same sum scaled by `n` instead: `(1 - m tau)(1 - beta) (n/m) sum_k p_k`.
    PairScaled,
}

pub fn alpha_bound_with_form(n: u32, m: u32, tau: f64, beta: f64, form: AlphaForm) -> f64 {
    assert!(tau >= 0.0 && (m as f64) * tau < 1.0, "contention must not fill the slot");
    assert!((0.0..=1.0).contains(&beta));
    let sum: f64 = (1..=m).map(|k| p_success_given_slot(n, m, k)).sum();
    let scale = match form {
        AlphaForm::SlotAveraged => 1.0 / m as f64,
        AlphaForm::PairScaled => n as f64 / m as f64,
    };
    (1.0 - m as f64 * tau) * (1.0 - beta) * scale * sum
}

/// Guaranteed fraction of ideal served weight (default scaling).
pub fn alpha_bound(n: u32, m: u32, tau: f64, beta: f64) -> f64 {
    alpha_bound_with_form(n, m, tau, beta, AlphaForm::SlotAveraged)
}

/// Constant bounding the one-slot drift of the quadratic backlog
/// function: `(n (r_max^2 + a_max^2) + gamma^2 + n^2 g_max^2) / 2`.
pub fn drift_constant_b1(n: u32, r_max: f64, a_max: f64, gamma: f64, g_max: f64) -> f64 {
    let n = n as f64;
    (n * (r_max * r_max + a_max * a_max) + gamma * gamma + n * n * g_max * g_max) / 2.0
}
