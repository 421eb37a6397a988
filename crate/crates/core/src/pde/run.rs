use crate::error::{Error, Result};
use crate::model::OdeState;
use crate::ode::step_count;

use super::field::FieldState;
use super::stepper::PdeStepper;

/// Output times and probe location of a spatial run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSchedule {
    pub t_end: f64,
    /// Hours; each must be a multiple of the time step within `[0, t_end]`.
    pub snapshot_times: Vec<f64>,
    /// Probe point in um.
    pub probe: (f64, f64),
}

/// Time series of all five fields at the probe cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSeries {
    pub cell: usize,
    pub samples: Vec<(f64, OdeState)>,
}

impl ProbeSeries {
    pub fn at_time(&self, t: f64) -> Option<OdeState> {
        self.samples
            .iter()
            .find(|(ts, _)| (ts - t).abs() < 1e-9)
            .map(|(_, y)| *y)
    }
}

#[derive(Debug, Clone)]
pub struct PdeRun {
    pub probe: ProbeSeries,
    pub snapshots: Vec<FieldState>,
    pub final_state: FieldState,
    pub steps: usize,
    /// Smallest value of any field seen at any step.
    pub min_value: f64,
}

/// Steps from `init` (at `init.t`, normally 0) to `t_end`, recording the
/// probe after every step and full snapshots at the scheduled times.
pub fn run(stepper: &PdeStepper, init: FieldState, schedule: &RunSchedule) -> Result<PdeRun> {
    let grid = stepper.grid();
    let dt = stepper.dt();
    let t0 = init.t;
    let n_steps = step_count(t0, schedule.t_end, dt)?;
    let probe_cell = grid
        .locate(schedule.probe.0, schedule.probe.1)
        .ok_or_else(|| {
            Error::Config(format!(
                "probe point ({}, {}) lies outside the scaffold",
                schedule.probe.0, schedule.probe.1
            ))
        })?;

    let mut snap_steps = Vec::with_capacity(schedule.snapshot_times.len());
    for &ts in &schedule.snapshot_times {
        if ts < t0 || ts > schedule.t_end {
            return Err(Error::Config(format!(
                "snapshot time {ts} outside the run span [{t0}, {}]",
                schedule.t_end
            )));
        }
        let k = if ts == t0 { 0 } else { step_count(t0, ts, dt)? };
        snap_steps.push(k);
    }
    let events: Vec<usize> = match stepper.renewal() {
        Some(r) => r
            .event_times(t0, schedule.t_end)
            .into_iter()
            .map(|te| step_count(t0, te, dt))
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };

    let mut state = init;
    let mut snapshots = Vec::new();
    let mut probe = vec![(t0, state.cell(probe_cell))];
    let mut min_value = state.min_value();
    if snap_steps.contains(&0) {
        snapshots.push(state.clone());
    }
    for k in 1..=n_steps {
        let mut next = stepper.step(&state)?;
        next.t = t0 + k as f64 * dt;
        min_value = min_value.min(next.min_value());
        probe.push((next.t, next.cell(probe_cell)));
        if snap_steps.contains(&k) {
            snapshots.push(next.clone());
        }
        if k < n_steps && events.contains(&k) {
            stepper.renew(&mut next);
            probe.push((next.t, next.cell(probe_cell)));
        }
        state = next;
    }

    Ok(PdeRun {
        probe: ProbeSeries {
            cell: probe_cell,
            samples: probe,
        },
        snapshots,
        final_state: state,
        steps: n_steps,
        min_value,
    })
}
