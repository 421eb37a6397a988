use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Model constants. Units are fixed: hours, micrometres, mol, with spatial
/// dimension d = 2.
///
/// `chi_c`, `k_minus` and `lambda11` have no published value; `chi_c` gets an
/// assumed default and the other two are optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    /// hMSC growth rate, 1/h.
    pub beta: f64,
    /// hMSC speed, um/h.
    pub s1: f64,
    /// Chondrocyte speed, um/h.
    pub s2: f64,
    pub omega1: f64,
    pub omega2: f64,
    /// ECM uptake by hMSCs, 1/h.
    pub delta1: f64,
    /// ECM production by chondrocytes, mol/h.
    pub delta2: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub alpha1_min: f64,
    pub alpha1_max: f64,
    pub alpha2_max: f64,
    /// Medium uptake rate, 1/h (listed as "alpha_chi" in the parameter table).
    pub a_chi: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    /// Medium diffusion coefficient, um^2/h.
    pub d_chi: f64,
    /// k1+/H, um^2/(h mol).
    pub k1p_over_h: f64,
    /// k2+/K, um^2/h.
    pub k2p_over_k: f64,
    pub c1_star: f64,
    pub c2_star: f64,
    pub lambda10: f64,
    pub lambda2: f64,
    /// Hill threshold of the medium response, mol/um^2.
    pub chi_c: f64,
    /// Detachment rate, 1/h.
    pub k_minus: Option<f64>,
    /// hMSC turning rate entering the taxis sensitivity, 1/h.
    pub lambda11: Option<f64>,
}

/// Default for `chi_c`: half of the initial medium concentration.
pub const DEFAULT_CHI_C: f64 = 5e-4;

impl Default for ParameterSet {
    fn default() -> Self {
        Self::table1()
    }
}

impl ParameterSet {
    /// Published parameter values, plus the assumed `chi_c` default.
    pub fn table1() -> Self {
        Self {
            beta: 0.5 / 3.0,
            s1: 30.0,
            s2: 12.0,
            omega1: 30.0,
            omega2: 12.0,
            delta1: 3.3,
            delta2: 330.0,
            s_min: 1.0,
            s_max: 3.0,
            alpha1_min: 0.025,
            alpha1_max: 0.05,
            alpha2_max: 0.05,
            a_chi: 3.18,
            gamma1: 3.3,
            gamma2: 1.0,
            gamma3: 3.307e-3,
            d_chi: 1e6,
            k1p_over_h: 5.0,
            k2p_over_k: 1.0,
            c1_star: 3.024e-3,
            c2_star: 3.024e-3,
            lambda10: 9e-4,
            lambda2: 1.44e-4,
            chi_c: DEFAULT_CHI_C,
            k_minus: None,
            lambda11: None,
        }
    }

    /// Width of the Hermite ramps, (S_max - S_min) / 10.
    pub fn s_d(&self) -> f64 {
        (self.s_max - self.s_min) / 10.0
    }

    /// omega1 / omega2; only the ratio enters the model.
    pub fn omega_ratio(&self) -> f64 {
        self.omega1 / self.omega2
    }

    /// Detachment rate used in the adhesion function; zero when unset.
    pub fn k_minus_or_zero(&self) -> f64 {
        self.k_minus.unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        // Reaction rates may be zero (switching a process off); scales,
        // capacities and turning rates must be strictly positive.
        let nonneg = [
            ("beta", self.beta),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("alpha1_min", self.alpha1_min),
            ("alpha2_max", self.alpha2_max),
            ("a_chi", self.a_chi),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
            ("d_chi", self.d_chi),
            ("k1p_over_h", self.k1p_over_h),
            ("k2p_over_k", self.k2p_over_k),
        ];
        let positive = [
            ("s1", self.s1),
            ("s2", self.s2),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("s_min", self.s_min),
            ("s_max", self.s_max),
            ("alpha1_max", self.alpha1_max),
            ("c1_star", self.c1_star),
            ("c2_star", self.c2_star),
            ("lambda10", self.lambda10),
            ("lambda2", self.lambda2),
            ("chi_c", self.chi_c),
        ];
        for (key, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Err(invalid(key, format!("must be finite and >= 0, got {v}")));
            }
        }
        for (key, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(invalid(key, format!("must be finite and > 0, got {v}")));
            }
        }
        for (key, v) in [("k_minus", self.k_minus), ("lambda11", self.lambda11)] {
            if let Some(v) = v {
                if !v.is_finite() || v <= 0.0 {
                    return Err(invalid(key, format!("must be finite and > 0, got {v}")));
                }
            }
        }
        if self.s_min >= self.s_max {
            return Err(invalid(
                "s_min",
                format!(
                    "s_min ({}) must be below s_max ({})",
                    self.s_min, self.s_max
                ),
            ));
        }
        if self.alpha1_min >= self.alpha1_max {
            return Err(invalid(
                "alpha1_min",
                format!(
                    "alpha1_min ({}) must be below alpha1_max ({})",
                    self.alpha1_min, self.alpha1_max
                ),
            ));
        }
        Ok(())
    }
}

fn invalid(key: &str, reason: String) -> Error {
    Error::InvalidParameter {
        key: key.to_string(),
        reason,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_is_valid() {
        let p = ParameterSet::table1();
        p.validate().unwrap();
        assert_eq!(p.s_d(), 0.2);
        assert_eq!(p.omega_ratio(), 2.5);
    }

    #[test]
    fn s_d_tracks_thresholds() {
        let mut p = ParameterSet::table1();
        p.s_max = 2.0;
        assert_eq!(p.s_d(), 0.1);
    }

    #[test]
    fn rejects_inverted_thresholds() {
        let mut p = ParameterSet::table1();
        p.s_min = 3.0;
        let err = p.validate().unwrap_err();
        assert!(err.to_string().contains("s_min"), "{err}");

        let mut p = ParameterSet::table1();
        p.alpha1_min = 0.06;
        assert!(p.validate().is_err());
    }

    #[test]
    fn rejects_nonpositive_capacity() {
        let mut p = ParameterSet::table1();
        p.c2_star = 0.0;
        assert!(p.validate().is_err());
        let mut p = ParameterSet::table1();
        p.k_minus = Some(-1.0);
        assert!(p.validate().is_err());
    }
}
