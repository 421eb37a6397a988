//! Nonlinear rate functions and the adhesion function.

use crate::error::{Error, Result};

use super::ParameterSet;

/// Stimulus factor of the differentiation rate: `alpha1_min` outside
/// `[S_min, S_max]`, `alpha1_max` on the plateau, joined by C^1 Hermite
/// cubics of half-width `S_d` centred on each threshold.
pub fn alpha1_s(s: f64, p: &ParameterSet) -> f64 {
    let sd = p.s_d();
    let (lo, hi) = (p.alpha1_min, p.alpha1_max);
    let mid = 0.5 * (hi + lo);
    if s <= p.s_min - sd {
        lo
    } else if s <= p.s_min + sd {
        let x = (s - p.s_min) / sd;
        (lo - hi) / 4.0 * x * x * x + 3.0 * (hi - lo) / 4.0 * x + mid
    } else if s <= p.s_max - sd {
        hi
    } else if s <= p.s_max + sd {
        let x = (s - p.s_max) / sd;
        (hi - lo) / 4.0 * x * x * x + 3.0 * (lo - hi) / 4.0 * x + mid
    } else {
        lo
    }
}

/// d alpha1_s / dS.
pub fn alpha1_s_slope(s: f64, p: &ParameterSet) -> f64 {
    let sd = p.s_d();
    let (lo, hi) = (p.alpha1_min, p.alpha1_max);
    if s <= p.s_min - sd || (s > p.s_min + sd && s <= p.s_max - sd) || s > p.s_max + sd {
        0.0
    } else if s <= p.s_min + sd {
        let x = (s - p.s_min) / sd;
        (3.0 * (lo - hi) / 4.0 * x * x + 3.0 * (hi - lo) / 4.0) / sd
    } else {
        let x = (s - p.s_max) / sd;
        (3.0 * (hi - lo) / 4.0 * x * x + 3.0 * (lo - hi) / 4.0) / sd
    }
}

/// Medium factor of the differentiation rate, `chi^2 / (chi_c^2 + chi^2)`.
pub fn alpha1_chi(chi: f64, p: &ParameterSet) -> Result<f64> {
    if !(chi >= 0.0) {
        return Err(Error::Domain {
            name: "chi",
            value: chi,
            expected: ">= 0",
        });
    }
    Ok(hill_up(chi, p.chi_c))
}

/// Stimulus factor of the dedifferentiation rate.
pub fn alpha2_s(s: f64, p: &ParameterSet) -> f64 {
    if s <= p.s_min {
        p.alpha2_max
    } else {
        p.alpha2_max * p.s_min / s
    }
}

pub fn alpha2_s_slope(s: f64, p: &ParameterSet) -> f64 {
    if s <= p.s_min {
        0.0
    } else {
        -p.alpha2_max * p.s_min / (s * s)
    }
}

/// Medium factor of the dedifferentiation rate, `chi_c^2 / (chi_c^2 + chi^2)`.
pub fn alpha2_chi(chi: f64, p: &ParameterSet) -> f64 {
    let c2 = p.chi_c * p.chi_c;
    c2 / (c2 + chi * chi)
}

pub(crate) fn hill_up(chi: f64, chi_c: f64) -> f64 {
    let x2 = chi * chi;
    x2 / (chi_c * chi_c + x2)
}

/// d/dchi of `chi^2 / (chi_c^2 + chi^2)`; the dedifferentiation factor has
/// the negated slope.
pub(crate) fn hill_up_slope(chi: f64, chi_c: f64) -> f64 {
    let c2 = chi_c * chi_c;
    let den = c2 + chi * chi;
    2.0 * chi * c2 / (den * den)
}

/// Adhesion function `B(h, tau) = (k1+/H) h + (k2+/K) tau + k-`.
///
/// An unset `k_minus` contributes zero.
pub fn adhesion(h: f64, tau: f64, p: &ParameterSet) -> Result<f64> {
    if !(h >= 0.0) {
        return Err(Error::Domain {
            name: "h",
            value: h,
            expected: ">= 0",
        });
    }
    if !(tau >= 0.0) {
        return Err(Error::Domain {
            name: "tau",
            value: tau,
            expected: ">= 0",
        });
    }
    Ok(adhesion_unchecked(h, tau, p))
}

#[inline]
pub(crate) fn adhesion_unchecked(h: f64, tau: f64, p: &ParameterSet) -> f64 {
    p.k1p_over_h * h + p.k2p_over_k * tau + p.k_minus_or_zero()
}
