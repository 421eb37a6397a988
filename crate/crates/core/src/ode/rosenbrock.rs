//! Linearly implicit Rosenbrock 2(3) pair with adaptive steps, and a
//! fixed-step implicit Euler method with Newton iteration.
//!
//! The adaptive pair is the L-stable second-order W-formula with a
//! third-order error estimate (d = 1/(2 + sqrt 2)).

use crate::error::{Error, Result};

use super::dense::{shifted_identity, Lu};

use super::trajectory::{Sample, SolverStats, Trajectory};

/// A system `y' = f(t, y)` of dimension `N`.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]>;

    /// `(df/dy, df/dt)`. The default uses central differences.
    fn jacobian(&self, t: f64, y: &[f64; N]) -> Result<([[f64; N]; N], [f64; N])> {
        let mut jac = [[0.0; N]; N];
        let mut yp = *y;
        for col in 0..N {
            let h = 1e-7 * y[col].abs().max(1e-7);
            let orig = yp[col];
            yp[col] = orig + h;
            let fp = self.rhs(t, &yp)?;
            yp[col] = orig - h;
            let fm = self.rhs(t, &yp)?;
            yp[col] = orig;
            for row in 0..N {
                jac[row][col] = (fp[row] - fm[row]) / (2.0 * h);
            }
        }
        let ht = 1e-7 * t.abs().max(1.0);
        let fp = self.rhs(t + ht, y)?;
        let fm = self.rhs(t - ht, y)?;
        let mut dt = [0.0; N];
        for i in 0..N {
            dt[i] = (fp[i] - fm[i]) / (2.0 * ht);
        }
        Ok((jac, dt))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: 1e-6,
            abs: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub tol: Tolerances,
    /// Output cadence in hours; steps are clipped to land on every sample.
    pub sample_interval: f64,
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            sample_interval: 0.5,
            initial_step: None,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorOptions {
    fn validate(&self, t0: f64, t_end: f64) -> Result<()> {
        if !(t_end > t0) || !t0.is_finite() || !t_end.is_finite() {
            return Err(Error::Config(format!(
                "integration span must satisfy t_end > t0, got [{t0}, {t_end}]"
            )));
        }
        if !(self.tol.rel > 0.0 && self.tol.abs > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if !(self.sample_interval > 0.0) {
            return Err(Error::Config("sample interval must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
struct Stop {
    t: f64,
    event: bool,
}

fn stops(t0: f64, t_end: f64, interval: f64, events: &[f64]) -> Vec<Stop> {
    let mut out = Vec::new();
    let mut k = 1u64;
    loop {
        let t = t0 + k as f64 * interval;
        if t >= t_end - 1e-9 * interval {
            break;
        }
        out.push(Stop { t, event: false });
        k += 1;
    }
    out.push(Stop {
        t: t_end,
        event: false,
    });
    for &te in events {
        if te <= t0 || te >= t_end {
            continue;
        }
        match out.iter_mut().find(|s| (s.t - te).abs() <= 1e-9 * interval) {
            Some(s) => {
                s.t = te;
                s.event = true;
            }
            None => out.push(Stop { t: te, event: true }),
        }
    }
    out.sort_by(|a, b| a.t.total_cmp(&b.t));
    out
}

/// Integrates `sys` from `t0` to `t_end` with the adaptive Rosenbrock pair.
///
/// `on_event` is invoked at each time in `events` (after landing on it
/// exactly); samples are recorded before and after the event.
pub fn solve_rosenbrock<const N: usize, S, F>(
    sys: &S,
    y0: [f64; N],
    t0: f64,
    t_end: f64,
    events: &[f64],
    mut on_event: F,
    opts: &IntegratorOptions,
) -> Result<Trajectory<N>>
where
    S: OdeSystem<N>,
    F: FnMut(f64, &mut [f64; N]),
{
    opts.validate(t0, t_end)?;
    let d = 1.0 / (2.0 + std::f64::consts::SQRT_2);
    let e32 = 6.0 + std::f64::consts::SQRT_2;
    let tol = opts.tol;
    let mut stats = SolverStats::default();

    let mut t = t0;
    let mut y = y0;
    let mut samples = vec![Sample { t, y: y0 }];
    let mut applied = Vec::new();

    let f0 = sys.rhs(t, &y0)?;
    stats.rhs_evaluations += 1;
    let mut h = match opts.initial_step {
        Some(h) => h,
        None => initial_step(&y, &f0, tol),
    }
    .min(opts.sample_interval)
    .min(t_end - t0);

    for stop in stops(t0, t_end, opts.sample_interval, events) {
        while t < stop.t {
            if stats.steps + stats.rejected_steps >= opts.max_steps {
                return Err(Error::StepSizeUnderflow { t, h });
            }
            let h_min = 16.0 * f64::EPSILON * t.abs().max(1.0);
            if h < h_min {
                return Err(Error::StepSizeUnderflow { t, h });
            }
            let remaining = stop.t - t;
            let last = h >= remaining || 1.05 * h >= remaining;
            let h_try = if last { remaining } else { h };

            let attempt = rosenbrock_step(sys, t, &y, h_try, d, e32, &mut stats);
            let (y_new, err_vec) = match attempt {
                Ok(v) => v,
                Err(e @ (Error::NonFinite { .. } | Error::SingularMatrix { .. })) => {
                    stats.rejected_steps += 1;
                    h = 0.25 * h_try;
                    if h < h_min {
                        return Err(match e {
                            Error::NonFinite { what, .. } => Error::NonFinite { what, t },
                            other => other,
                        });
                    }
                    continue;
                }
                Err(e) => return Err(e),
            };

            let mut err = 0.0f64;
            for i in 0..N {
                let scale = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
                err = err.max(err_vec[i].abs() / scale);
            }
            if err <= 1.0 {
                stats.steps += 1;
                t = if last { stop.t } else { t + h_try };
                y = y_new;
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-1.0 / 3.0)).min(5.0)
                };
                // a clipped final step says nothing about the attainable size
                h = if last {
                    h.max(h_try * grow)
                } else {
                    h_try * grow
                };
                h = h.min(opts.sample_interval);
            } else {
                stats.rejected_steps += 1;
                h = h_try * (0.9 * err.powf(-1.0 / 3.0)).max(0.2);
            }
        }
        samples.push(Sample { t, y });
        if stop.event {
            on_event(t, &mut y);
            samples.push(Sample { t, y });
            applied.push(t);
        }
    }

    Ok(Trajectory {
        samples,
        events: applied,
        stats,
    })
}

fn rosenbrock_step<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    t: f64,
    y: &[f64; N],
    h: f64,
    d: f64,
    e32: f64,
    stats: &mut SolverStats,
) -> Result<([f64; N], [f64; N])> {
    let (jac, dfdt) = sys.jacobian(t, y)?;
    stats.jacobian_evaluations += 1;
    let lu = Lu::factor(shifted_identity(&jac, h * d)).ok_or(Error::SingularMatrix { t })?;
    stats.factorizations += 1;

    let f0 = sys.rhs(t, y)?;
    let k1 = lu.solve(&combine(|i| f0[i] + h * d * dfdt[i]));
    let y1: [f64; N] = combine(|i| y[i] + 0.5 * h * k1[i]);
    let f1 = sys.rhs(t + 0.5 * h, &y1)?;
    let k2: [f64; N] = {
        let s = lu.solve(&combine(|i| f1[i] - k1[i]));
        combine(|i| s[i] + k1[i])
    };
    let y_new: [f64; N] = combine(|i| y[i] + h * k2[i]);
    let f2 = sys.rhs(t + h, &y_new)?;
    let k3 = lu.solve(&combine(|i| {
        f2[i] - e32 * (k2[i] - f1[i]) - 2.0 * (k1[i] - f0[i]) + h * d * dfdt[i]
    }));
    stats.rhs_evaluations += 3;
    if !y_new.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite {
            what: "ODE state",
            t,
        });
    }
    let err: [f64; N] = combine(|i| h / 6.0 * (k1[i] - 2.0 * k2[i] + k3[i]));
    Ok((y_new, err))
}

#[inline]
fn combine<const N: usize>(f: impl Fn(usize) -> f64) -> [f64; N] {
    std::array::from_fn(f)
}

fn initial_step<const N: usize>(y: &[f64; N], f: &[f64; N], tol: Tolerances) -> f64 {
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for i in 0..N {
        let sc = tol.abs + tol.rel * y[i].abs();
        d0 = d0.max(y[i].abs() / sc);
        d1 = d1.max(f[i].abs() / sc);
    }
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        (0.01 * d0 / d1).max(1e-10)
    }
}

/// One implicit Euler step `y1 = y0 + dt f(t1, y1)` solved by Newton's
/// method. Returns the new state and the number of Newton iterations.
pub fn implicit_euler_step<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    t1: f64,
    y0: &[f64; N],
    dt: f64,
) -> Result<([f64; N], usize)> {
    const MAX_ITER: usize = 30;
    let mut y = *y0;
    let mut last_norm = f64::INFINITY;
    for iter in 1..=MAX_ITER {
        let f = sys.rhs(t1, &y)?;
        let (jac, _) = sys.jacobian(t1, &y)?;
        let g = combine(|i| y[i] - y0[i] - dt * f[i]);
        let lu = Lu::factor(shifted_identity(&jac, dt)).ok_or(Error::SingularMatrix { t: t1 })?;
        let delta = lu.solve(&g);
        let mut norm = 0.0f64;
        for i in 0..N {
            y[i] -= delta[i];
            let scale = 1e-13 * y[i].abs().max(y0[i].abs()) + 1e-300;
            norm = norm.max(delta[i].abs() / scale);
        }
        if !norm.is_finite() && !y.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "implicit Euler iterate",
                t: t1,
            });
        }
        // converged, or stalled at round-off level
        if norm <= 1.0 || (iter > 3 && norm >= last_norm && norm < 1e3) {
            return Ok((y, iter));
        }
        last_norm = norm;
    }
    Err(Error::NewtonDivergence {
        t: t1,
        iterations: MAX_ITER,
        residual: last_norm * 1e-13,
    })
}

/// Fixed-step implicit Euler from `t0` to `t0 + n dt`, recording every step.
/// Step `k` ends at `t0 + k dt`; events are applied after the step landing
/// on them (within 1e-9 dt).
pub fn solve_implicit_euler<const N: usize, S, F>(
    sys: &S,
    y0: [f64; N],
    t0: f64,
    dt: f64,
    n_steps: usize,
    events: &[f64],
    mut on_event: F,
) -> Result<Trajectory<N>>
where
    S: OdeSystem<N>,
    F: FnMut(f64, &mut [f64; N]),
{
    if !(dt > 0.0) {
        return Err(Error::Config(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let mut stats = SolverStats::default();
    let mut y = y0;
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(Sample { t: t0, y });
    let mut applied = Vec::new();
    for k in 1..=n_steps {
        let t1 = t0 + k as f64 * dt;
        let (y1, iters) = implicit_euler_step(sys, t1, &y, dt)?;
        stats.steps += 1;
        stats.newton_iterations += iters;
        y = y1;
        samples.push(Sample { t: t1, y });
        if k < n_steps && events.iter().any(|&te| (te - t1).abs() <= 1e-9 * dt) {
            on_event(t1, &mut y);
            samples.push(Sample { t: t1, y });
            applied.push(t1);
        }
    }
    Ok(Trajectory {
        samples,
        events: applied,
        stats,
    })
}
