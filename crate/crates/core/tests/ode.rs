mod common;

use seedsim::model::{OdeState, ParameterSet, SeedingModel, StimulusSignal};
use seedsim::ode::{
    integrate, integrate_fixed, solve_rosenbrock, IntegratorOptions, OdeSystem, RenewalSchedule,
    Tolerances,
};
use seedsim::Error;

struct Decay;

impl OdeSystem<1> for Decay {
    fn rhs(&self, _t: f64, y: &[f64; 1]) -> seedsim::Result<[f64; 1]> {
        Ok([-y[0]])
    }
}

/// y'' = -y written as a first-order system; stiff-solver sanity on an
/// oscillator.
struct Oscillator;

impl OdeSystem<2> for Oscillator {
    fn rhs(&self, _t: f64, y: &[f64; 2]) -> seedsim::Result<[f64; 2]> {
        Ok([y[1], -y[0]])
    }
}

struct Blowup;

impl OdeSystem<1> for Blowup {
    fn rhs(&self, t: f64, y: &[f64; 1]) -> seedsim::Result<[f64; 1]> {
        let v = y[0] * y[0];
        if !v.is_finite() {
            return Err(Error::NonFinite { what: "rhs", t });
        }
        Ok([v])
    }
}

fn seeding_model() -> SeedingModel {
    SeedingModel::new(ParameterSet::table1(), StimulusSignal::default())
}

// The tolerance bounds the local error per step. For the second-order
// solution that is propagated, the global error grows like tol^(2/3) and is
// about ten times the relative tolerance at the defaults.
#[test]
fn exponential_decay_reaches_one_over_e() {
    let opts = IntegratorOptions::default();
    let traj = solve_rosenbrock(&Decay, [1.0], 0.0, 1.0, &[], |_, _| {}, &opts).unwrap();
    let y = traj.last().y[0];
    assert!((y - (-1.0f64).exp()).abs() < 20.0 * opts.tol.rel, "{y}");
    assert_eq!(traj.last().t, 1.0);
    assert_eq!(traj.samples.first().unwrap().t, 0.0);
}

#[test]
fn tighter_tolerance_means_smaller_error() {
    let err = |rel: f64| {
        let opts = IntegratorOptions {
            tol: Tolerances {
                rel,
                abs: rel * 1e-3,
            },
            ..IntegratorOptions::default()
        };
        let traj =
            solve_rosenbrock(&Oscillator, [1.0, 0.0], 0.0, 10.0, &[], |_, _| {}, &opts).unwrap();
        (traj.last().y[0] - 10.0f64.cos()).abs()
    };
    let (coarse, fine) = (err(1e-4), err(1e-8));
    // Four decades of tolerance buy at least (1e4)^(2/3) / 10 in accuracy.
    assert!(fine < coarse / 40.0, "coarse {coarse:e} fine {fine:e}");
    assert!(fine < 1e-5);
}

#[test]
fn finite_time_blowup_is_reported_with_its_time() {
    let opts = IntegratorOptions::default();
    let err = solve_rosenbrock(&Blowup, [1.0], 0.0, 2.0, &[], |_, _| {}, &opts).unwrap_err();
    match err {
        Error::NonFinite { t, .. } | Error::StepSizeUnderflow { t, .. } => {
            assert!(t > 0.5 && t <= 1.0 + 1e-6, "failure reported at t = {t}")
        }
        other => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn invalid_span_and_tolerances_are_rejected() {
    let m = seeding_model();
    let y0 = OdeState::seeding_initial();
    assert!(integrate(&m, y0, 1.0, 1.0, None, &IntegratorOptions::default()).is_err());
    let bad = IntegratorOptions {
        tol: Tolerances {
            rel: 0.0,
            abs: 1e-9,
        },
        ..IntegratorOptions::default()
    };
    assert!(integrate(&m, y0, 0.0, 1.0, None, &bad).is_err());
}

#[test]
fn six_day_run_matches_rk4_oracle() {
    let p = ParameterSet::table1();
    let s = StimulusSignal::default();
    let m = SeedingModel::new(p.clone(), s);
    let traj = integrate(
        &m,
        OdeState::seeding_initial(),
        0.0,
        144.0,
        None,
        &IntegratorOptions::default(),
    )
    .unwrap();
    let oracle = common::rk4_oracle(&p, &s, OdeState::seeding_initial(), 144.0, 1e-3, 0.5);
    assert_eq!(oracle.len(), traj.len());
    let err = common::max_scaled_error(&oracle, |t| {
        traj.samples
            .iter()
            .find(|x| x.t == t)
            .expect("sample on the 0.5 h grid")
            .y
    });
    for (name, e) in OdeState::NAMES.iter().zip(err) {
        assert!(e <= 1e-4, "{name}: scaled error {e:e}");
    }
}

#[test]
fn samples_are_on_the_half_hour_grid_and_nonnegative() {
    let traj = integrate(
        &seeding_model(),
        OdeState::seeding_initial(),
        0.0,
        144.0,
        None,
        &IntegratorOptions::default(),
    )
    .unwrap();
    assert_eq!(traj.len(), 289);
    for (i, s) in traj.samples.iter().enumerate() {
        assert_eq!(s.t, 0.5 * i as f64);
        assert!(
            s.y.iter().all(|&v| v >= -1e-9),
            "negative state at t = {}",
            s.t
        );
    }
    let chi = traj.component(2);
    assert!(chi.windows(2).all(|w| w[1] <= w[0]));
    assert!(chi[chi.len() - 1] < chi[0]);
}

#[test]
fn renewal_events_are_exact_and_bracketed_by_samples() {
    let schedule = RenewalSchedule::every_three_days();
    let traj = integrate(
        &seeding_model(),
        OdeState::seeding_initial(),
        0.0,
        504.0,
        Some(&schedule),
        &IntegratorOptions::default(),
    )
    .unwrap();
    assert_eq!(traj.events, vec![72.0, 144.0, 216.0, 288.0, 360.0, 432.0]);
    assert_eq!(traj.last().t, 504.0);
    for &te in &traj.events {
        let at: Vec<_> = traj.samples.iter().filter(|s| s.t == te).collect();
        assert_eq!(at.len(), 2, "pre- and post-event samples at {te}");
        assert!(at[0].y[2] < 1e-3);
        assert_eq!(at[1].y[2], 1e-3);
        assert_eq!(at[0].y[0], at[1].y[0]);
        assert_eq!(at[0].y[4], at[1].y[4]);
    }
    // Between events the medium only decays.
    for w in traj.samples.windows(2) {
        if w[0].t < w[1].t {
            assert!(
                w[1].y[2] <= w[0].y[2],
                "chi rose between {} and {}",
                w[0].t,
                w[1].t
            );
        }
    }
    let ts: Vec<f64> = traj.times().collect();
    assert!(ts.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn no_event_at_the_final_time() {
    let schedule = RenewalSchedule::every_three_days();
    let traj = integrate(
        &seeding_model(),
        OdeState::seeding_initial(),
        0.0,
        144.0,
        Some(&schedule),
        &IntegratorOptions::default(),
    )
    .unwrap();
    assert_eq!(traj.events, vec![72.0]);
    assert_eq!(traj.samples.iter().filter(|s| s.t == 144.0).count(), 1);
}

#[test]
fn conversion_is_conserved_without_growth() {
    let p = ParameterSet {
        beta: 0.0,
        a_chi: 0.0,
        ..ParameterSet::table1()
    };
    let m = SeedingModel::new(p.clone(), StimulusSignal::constant(1.2));
    let traj = integrate(
        &m,
        OdeState::seeding_initial(),
        0.0,
        144.0,
        None,
        &IntegratorOptions::default(),
    )
    .unwrap();
    let w = 1.0 / p.omega_ratio();
    let q0 = w * traj.samples[0].y[0] + traj.samples[0].y[1];
    for s in &traj.samples {
        let q = w * s.y[0] + s.y[1];
        assert!(((q - q0) / q0).abs() < 1e-6);
        assert_eq!(s.y[2], 1e-3, "frozen medium");
    }
}

#[test]
fn runs_are_bit_identical() {
    let run = || {
        integrate(
            &seeding_model(),
            OdeState::seeding_initial(),
            0.0,
            504.0,
            Some(&RenewalSchedule::every_three_days()),
            &IntegratorOptions::default(),
        )
        .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.samples, b.samples);
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn implicit_euler_converges_to_the_adaptive_solution() {
    let m = seeding_model();
    let y0 = OdeState::seeding_initial();
    let opts = IntegratorOptions {
        tol: Tolerances {
            rel: 1e-10,
            abs: 1e-14,
        },
        ..IntegratorOptions::default()
    };
    let reference = integrate(&m, y0, 0.0, 24.0, None, &opts).unwrap();
    let err = |dt: f64| {
        let tr = integrate_fixed(&m, y0, 0.0, 24.0, dt, None).unwrap();
        let a = tr.final_state().c1;
        let b = reference.final_state().c1;
        (a - b).abs() / b
    };
    let (e1, e2) = (err(0.1), err(0.05));
    assert!(
        e2 < e1 && e1 / e2 > 1.8 && e1 / e2 < 2.2,
        "first order: {e1:e} vs {e2:e}"
    );
    assert!(integrate_fixed(&m, y0, 0.0, 1.0, 0.3, None).is_err());
}
