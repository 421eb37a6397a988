//! Six days of well-mixed seeding dynamics under the oscillating stimulus.
//!
//! cargo run --release --example ode_seeding

use seedsim::model::{OdeState, ParameterSet, SeedingModel, StimulusSignal};
use seedsim::ode::{integrate, IntegratorOptions};

fn main() -> seedsim::Result<()> {
    let model = SeedingModel::new(ParameterSet::table1(), StimulusSignal::default());
    let traj = integrate(
        &model,
        OdeState::seeding_initial(),
        0.0,
        144.0,
        None,
        &IntegratorOptions::default(),
    )?;

    println!(
        "{:>6} {:>11} {:>11} {:>11} {:>11} {:>11}",
        "t [h]", "c1", "c2", "chi", "h", "tau"
    );
    for (i, s) in traj.samples.iter().enumerate() {
        if i % 24 == 0 || i + 1 == traj.len() {
            let y = s.y;
            println!(
                "{:>6.1} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e}",
                s.t, y[0], y[1], y[2], y[3], y[4]
            );
        }
    }

    let c2 = traj.component(1);
    let (imax, _) =
        c2.iter().enumerate().fold(
            (0, f64::MIN),
            |best, (i, &v)| if v > best.1 { (i, v) } else { best },
        );
    println!("\nchondrocytes peak at t = {} h", traj.samples[imax].t);
    println!("{:?}", traj.stats);
    Ok(())
}
