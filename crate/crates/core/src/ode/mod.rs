//! Stiff time integration of the well-mixed model with periodic medium
//! renewal and fixed-cadence output.

mod dense;
mod renewal;
mod rosenbrock;
mod trajectory;

pub use renewal::{apply_renewal, RenewalMode, RenewalSchedule};
pub use rosenbrock::{
    implicit_euler_step, solve_implicit_euler, solve_rosenbrock, IntegratorOptions, OdeSystem,
    Tolerances,
};
pub use trajectory::{Sample, SolverStats, Trajectory, ODE_UNITS_LINE};

use crate::error::Result;
use crate::model::{reaction_jacobian, OdeState, SeedingModel};

impl OdeSystem<5> for SeedingModel {
    fn rhs(&self, t: f64, y: &[f64; 5]) -> Result<[f64; 5]> {
        Ok(SeedingModel::rhs(self, t, &OdeState::from_array(*y))?.to_array())
    }

    fn jacobian(&self, t: f64, y: &[f64; 5]) -> Result<([[f64; 5]; 5], [f64; 5])> {
        Ok(reaction_jacobian(
            t,
            &OdeState::from_array(*y),
            &self.stimulus,
            &self.params,
        ))
    }
}

/// Adaptive integration of the seeding model over `[t0, t_end]`, stopping at
/// every renewal time of `schedule`.
pub fn integrate(
    model: &SeedingModel,
    y0: OdeState,
    t0: f64,
    t_end: f64,
    schedule: Option<&RenewalSchedule>,
    opts: &IntegratorOptions,
) -> Result<Trajectory<5>> {
    let events = match schedule {
        Some(s) => {
            s.validate()?;
            s.event_times(t0, t_end)
        }
        None => Vec::new(),
    };
    solve_rosenbrock(
        model,
        y0.to_array(),
        t0,
        t_end,
        &events,
        |_, y| {
            if let Some(s) = schedule {
                *y = s.apply(&OdeState::from_array(*y)).to_array();
            }
        },
        opts,
    )
}

/// Fixed-step implicit Euler integration of the seeding model, one sample per
/// step. `t_end - t0` must be an integer multiple of `dt`.
pub fn integrate_fixed(
    model: &SeedingModel,
    y0: OdeState,
    t0: f64,
    t_end: f64,
    dt: f64,
    schedule: Option<&RenewalSchedule>,
) -> Result<Trajectory<5>> {
    let n_steps = step_count(t0, t_end, dt)?;
    let events = match schedule {
        Some(s) => {
            s.validate()?;
            s.event_times(t0, t_end)
        }
        None => Vec::new(),
    };
    solve_implicit_euler(model, y0.to_array(), t0, dt, n_steps, &events, |_, y| {
        if let Some(s) = schedule {
            *y = s.apply(&OdeState::from_array(*y)).to_array();
        }
    })
}

/// Number of fixed steps of size `dt` covering `[t0, t_end]`.
pub fn step_count(t0: f64, t_end: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !(t_end > t0) {
        return Err(crate::Error::Config(format!(
            "need dt > 0 and t_end > t0 (dt = {dt}, span [{t0}, {t_end}])"
        )));
    }
    let n = (t_end - t0) / dt;
    let rounded = n.round();
    if (n - rounded).abs() > 1e-9 * rounded.max(1.0) {
        return Err(crate::Error::Config(format!(
            "span {} h is not a multiple of dt = {dt} h",
            t_end - t0
        )));
    }
    Ok(rounded as usize)
}
