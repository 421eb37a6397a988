//! Right-hand side of the well-mixed seeding model and its Jacobian.

use crate::error::{Error, Result};

use super::rates::{alpha1_s, alpha1_s_slope, alpha2_s, alpha2_s_slope, hill_up, hill_up_slope};
use super::{OdeState, ParameterSet, StimulusSignal};

/// Time derivative of the five model variables.
///
/// Rate functions see `max(chi, 0)`; the linear terms use the raw state.
pub fn ode_rhs(
    t: f64,
    y: &OdeState,
    stimulus: &StimulusSignal,
    p: &ParameterSet,
) -> Result<OdeState> {
    if !t.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite {
            what: "ODE state",
            t,
        });
    }
    let dy = reaction(stimulus.value(t), y, p);
    if !dy.is_finite() {
        return Err(Error::NonFinite {
            what: "ODE right-hand side",
            t,
        });
    }
    Ok(dy)
}

/// Reaction terms for a given stimulus value, without input checks.
#[inline]
pub fn reaction(s: f64, y: &OdeState, p: &ParameterSet) -> OdeState {
    let chi_pos = y.chi.max(0.0);
    let a1 = alpha1_s(s, p) * hill_up(chi_pos, p.chi_c);
    let a2 = alpha2_s(s, p) * (1.0 - hill_up(chi_pos, p.chi_c));
    let r = p.omega_ratio();
    let u1 = y.c1 / p.c1_star;
    let u2 = y.c2 / p.c2_star;

    OdeState {
        c1: -a1 * y.c1 + a2 * r * y.c2 + p.beta * y.c1 * (1.0 - u1 - u2),
        c2: a1 / r * y.c1 - a2 * y.c2,
        chi: -p.a_chi * (u1 + u2) * y.chi,
        h: -p.gamma1 * u1 * y.h - p.gamma2 * u2 * y.h + p.gamma3 * y.c2 / (1.0 + u2),
        tau: -p.delta1 * u1 * y.tau + p.delta2 * y.c2,
    }
}

/// Analytic Jacobian `df/dy` (row-major, variable order c1, c2, chi, h, tau)
/// together with the explicit time derivative `df/dt` through the stimulus.
pub fn reaction_jacobian(
    t: f64,
    y: &OdeState,
    stimulus: &StimulusSignal,
    p: &ParameterSet,
) -> ([[f64; 5]; 5], [f64; 5]) {
    let s = stimulus.value(t);
    let ds = stimulus.derivative(t);
    let chi_pos = y.chi.max(0.0);
    let up = hill_up(chi_pos, p.chi_c);
    let dup = if y.chi > 0.0 {
        hill_up_slope(chi_pos, p.chi_c)
    } else {
        0.0
    };
    let a1s = alpha1_s(s, p);
    let a2s = alpha2_s(s, p);
    let a1 = a1s * up;
    let a2 = a2s * (1.0 - up);
    let da1 = a1s * dup;
    let da2 = -a2s * dup;
    let r = p.omega_ratio();
    let (c1s, c2s) = (p.c1_star, p.c2_star);
    let u1 = y.c1 / c1s;
    let u2 = y.c2 / c2s;
    let sat = 1.0 + u2;

    let mut j = [[0.0; 5]; 5];
    j[0][0] = -a1 + p.beta * (1.0 - 2.0 * u1 - u2);
    j[0][1] = a2 * r - p.beta * y.c1 / c2s;
    j[0][2] = -da1 * y.c1 + da2 * r * y.c2;

    j[1][0] = a1 / r;
    j[1][1] = -a2;
    j[1][2] = da1 / r * y.c1 - da2 * y.c2;

    j[2][0] = -p.a_chi * y.chi / c1s;
    j[2][1] = -p.a_chi * y.chi / c2s;
    j[2][2] = -p.a_chi * (u1 + u2);

    j[3][0] = -p.gamma1 * y.h / c1s;
    j[3][1] = -p.gamma2 * y.h / c2s + p.gamma3 / (sat * sat);
    j[3][3] = -(p.gamma1 * u1 + p.gamma2 * u2);

    j[4][0] = -p.delta1 * y.tau / c1s;
    j[4][1] = p.delta2;
    j[4][4] = -p.delta1 * u1;

    let da1_dt = alpha1_s_slope(s, p) * up * ds;
    let da2_dt = alpha2_s_slope(s, p) * (1.0 - up) * ds;
    let mut dt = [0.0; 5];
    dt[0] = -da1_dt * y.c1 + da2_dt * r * y.c2;
    dt[1] = da1_dt / r * y.c1 - da2_dt * y.c2;
    (j, dt)
}

/// The well-mixed model bundled with its stimulus.
#[derive(Debug, Clone)]
pub struct SeedingModel {
    pub params: ParameterSet,
    pub stimulus: StimulusSignal,
}

impl SeedingModel {
    pub fn new(params: ParameterSet, stimulus: StimulusSignal) -> Self {
        Self { params, stimulus }
    }

    pub fn rhs(&self, t: f64, y: &OdeState) -> Result<OdeState> {
        ode_rhs(t, y, &self.stimulus, &self.params)
    }
}
