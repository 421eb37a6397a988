use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::OdeState;

/// How the differentiation medium is renewed at each event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenewalMode {
    /// Replace chi by the renewal value.
    ResetToInitial,
    /// Add the renewal value to the current chi.
    AddInitial,
}

/// Periodic medium renewal at t = k * period, k = 1, 2, ...
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenewalSchedule {
    /// Hours between renewals.
    pub period: f64,
    pub mode: RenewalMode,
    /// mol/um^2.
    pub value: f64,
}

impl RenewalSchedule {
    /// Three-day renewal back to the initial medium concentration.
    pub fn every_three_days() -> Self {
        Self {
            period: 72.0,
            mode: RenewalMode::ResetToInitial,
            value: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period > 0.0) || !self.period.is_finite() {
            return Err(Error::Config(format!(
                "renewal period must be positive, got {}",
                self.period
            )));
        }
        if !(self.value >= 0.0) || !self.value.is_finite() {
            return Err(Error::Config(format!(
                "renewal value must be nonnegative, got {}",
                self.value
            )));
        }
        Ok(())
    }

    /// Event times strictly inside `(t0, t_end)`.
    pub fn event_times(&self, t0: f64, t_end: f64) -> Vec<f64> {
        let first = (t0 / self.period).floor() as i64 + 1;
        let mut times = Vec::new();
        let mut k = first.max(1);
        loop {
            let t = k as f64 * self.period;
            if t >= t_end {
                break;
            }
            if t > t0 {
                times.push(t);
            }
            k += 1;
        }
        times
    }

    pub fn apply(&self, y: &OdeState) -> OdeState {
        apply_renewal(y, self)
    }
}

/// Renews the medium; all other components pass through untouched.
pub fn apply_renewal(y: &OdeState, schedule: &RenewalSchedule) -> OdeState {
    let chi = match schedule.mode {
        RenewalMode::ResetToInitial => schedule.value,
        RenewalMode::AddInitial => y.chi + schedule.value,
    };
    OdeState { chi, ..*y }
}
