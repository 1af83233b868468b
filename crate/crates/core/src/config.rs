//! Run configuration and validation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::ChannelModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchedulerKind {
    /// Genie scheduler: picks the feasible pair with the largest weight.
    Centralized,
    /// Mini-slot contention with quantile (CDF-uniform) slot assignment.
    CadsUniform,
    /// Mini-slot contention with linear slot assignment capped at `w_max`.
    CadsLinear,
    /// Mini-slot contention with numerically optimized slot thresholds.
    CadsOptimal,
    /// Fully distributed persistence-based randomized scheduler.
    Irds,
}

impl SchedulerKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchedulerKind::Centralized => "centralized",
            SchedulerKind::CadsUniform => "cads-uniform",
            SchedulerKind::CadsLinear => "cads-linear",
            SchedulerKind::CadsOptimal => "cads-optimal",
            SchedulerKind::Irds => "irds",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "centralized" => SchedulerKind::Centralized,
            "cads-uniform" => SchedulerKind::CadsUniform,
            "cads-linear" => SchedulerKind::CadsLinear,
            "cads-optimal" => SchedulerKind::CadsOptimal,
            "irds" => SchedulerKind::Irds,
            _ => return None,
        })
    }

    pub fn is_cads(&self) -> bool {
        matches!(
            self,
            SchedulerKind::CadsUniform | SchedulerKind::CadsLinear | SchedulerKind::CadsOptimal
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UtilityKind {
    /// Proportional fairness, `U(x) = ln(1 + x)`.
    Log,
}

impl UtilityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            UtilityKind::Log => "log",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "log" => Some(UtilityKind::Log),
            _ => None,
        }
    }
}

/// Everything a single simulation run depends on.
///
/// `gamma` and `nu` are the average and instantaneous interference budgets
/// at the protected receiver; both accept `f64::INFINITY` to disable the
/// constraint. `w_max = None` asks the engine to calibrate the linear
/// mapping cap from the channel model at run start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub p: f64,
    pub n0: f64,
    pub gamma: f64,
    pub nu: f64,
    pub v: f64,
    pub a_max: f64,
    pub m: usize,
    pub tau: f64,
    pub horizon: u64,
    pub seed: u64,
    pub scheduler: SchedulerKind,
    pub utility: UtilityKind,
    pub w_max: Option<f64>,
    pub cdf_samples: usize,
    pub direct_mean: f64,
    pub interference_mean: f64,
    /// Slots between threshold re-optimizations (cads-optimal only).
    pub reopt_interval: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n: 10,
            p: 1.0,
            n0: 1.0,
            gamma: 1.0,
            nu: f64::INFINITY,
            v: 200.0,
            a_max: 100.0,
            m: 200,
            tau: 1e-4,
            horizon: 100_000,
            seed: 1,
            scheduler: SchedulerKind::Centralized,
            utility: UtilityKind::Log,
            w_max: None,
            cdf_samples: 2000,
            direct_mean: 2.0,
            interference_mean: 1.0,
            reopt_interval: 25_000,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key, reason: reason.into() }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == 0 {
            return Err(invalid("n", "need at least one pair"));
        }
        if !(self.p > 0.0) {
            return Err(invalid("p", "transmit power must be positive"));
        }
        if !(self.n0 > 0.0) {
            return Err(invalid("n0", "noise power must be positive"));
        }
        if self.gamma.is_nan() || self.gamma < 0.0 {
            return Err(invalid("gamma", "average interference budget must be >= 0"));
        }
        if self.nu.is_nan() || self.nu < 0.0 {
            return Err(invalid("nu", "instantaneous interference budget must be >= 0"));
        }
        if !(self.v > 0.0) {
            return Err(invalid("v", "utility weight must be positive"));
        }
        if !(self.a_max > 0.0) {
            return Err(invalid("a_max", "admission cap must be positive"));
        }
        if self.m == 0 {
            return Err(invalid("m", "need at least one contention mini-slot"));
        }
        if self.tau.is_nan() || self.tau < 0.0 {
            return Err(invalid("tau", "mini-slot length must be >= 0"));
        }
        let overhead = self.m as f64 * self.tau;
        if overhead >= 1.0 {
            return Err(invalid(
                "tau",
                format!("contention overhead m*tau = {overhead} leaves no data phase (need < 1)"),
            ));
        }
        if let Some(w) = self.w_max {
            if !(w > 0.0) {
                return Err(invalid("w_max", "linear mapping cap must be positive"));
            }
        }
        if self.cdf_samples == 0 {
            return Err(invalid("cdf_samples", "need at least one sample"));
        }
        if !(self.direct_mean > 0.0) {
            return Err(invalid("direct_mean", "mean must be positive"));
        }
        if !(self.interference_mean > 0.0) {
            return Err(invalid("interference_mean", "mean must be positive"));
        }
        if self.reopt_interval == 0 {
            return Err(invalid("reopt_interval", "interval must be positive"));
        }
        Ok(())
    }

    /// Fraction of the slot left for data after `m` mini-slots of length `tau`.
    pub fn data_fraction(&self) -> f64 {
        1.0 - self.m as f64 * self.tau
    }

    pub fn channel(&self) -> ChannelModel {
        ChannelModel::iid(self.n, self.direct_mean, self.interference_mean)
    }
}
