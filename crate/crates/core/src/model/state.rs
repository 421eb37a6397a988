use serde::{Deserialize, Serialize};

/// The five model variables at one point in time (or one grid cell).
///
/// Cell densities are in 1/um^2, concentrations and ECM density in mol/um^2.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OdeState {
    pub c1: f64,
    pub c2: f64,
    pub chi: f64,
    pub h: f64,
    pub tau: f64,
}

impl OdeState {
    pub const DIM: usize = 5;
    pub const NAMES: [&'static str; 5] = ["c1", "c2", "chi", "h", "tau"];

    pub const fn new(c1: f64, c2: f64, chi: f64, h: f64, tau: f64) -> Self {
        Self {
            c1,
            c2,
            chi,
            h,
            tau,
        }
    }

    /// Initial values of the well-mixed seeding experiment.
    pub const fn seeding_initial() -> Self {
        Self::new(0.001, 0.0, 0.001, 1000.0, 0.0)
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.c1, self.c2, self.chi, self.h, self.tau]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn min_component(&self) -> f64 {
        self.to_array().into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// Prescribed mechanical stimulus `offset + amplitude * cos(t / period)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StimulusSignal {
    pub offset: f64,
    pub amplitude: f64,
    /// Time scale in hours; the cosine argument is `t / period`.
    pub period: f64,
}

impl Default for StimulusSignal {
    fn default() -> Self {
        Self {
            offset: 0.5,
            amplitude: 1.0,
            period: 10.0,
        }
    }
}

impl StimulusSignal {
    pub fn constant(value: f64) -> Self {
        Self {
            offset: value,
            amplitude: 0.0,
            period: 1.0,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        if self.amplitude == 0.0 {
            return self.offset;
        }
        self.offset + self.amplitude * (t / self.period).cos()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        if self.amplitude == 0.0 {
            return 0.0;
        }
        -self.amplitude / self.period * (t / self.period).sin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_stimulus_starts_at_one_and_a_half() {
        let s = StimulusSignal::default();
        assert_eq!(s.value(0.0), 1.5);
        assert!((s.value(10.0 * std::f64::consts::PI) - (-0.5)).abs() < 1e-15);
        assert_eq!(StimulusSignal::constant(2.0).value(123.0), 2.0);
    }

    #[test]
    fn stimulus_derivative_matches_difference_quotient() {
        let s = StimulusSignal::default();
        for &t in &[0.3, 7.0, 55.5] {
            let h = 1e-5;
            let fd = (s.value(t + h) - s.value(t - h)) / (2.0 * h);
            assert!((fd - s.derivative(t)).abs() < 1e-9);
        }
    }
}
