//! Three weeks with and without renewing the differentiation medium every
//! three days.
//!
//! cargo run --release --example medium_renewal

use seedsim::model::{OdeState, ParameterSet, SeedingModel, StimulusSignal};
use seedsim::ode::{integrate, IntegratorOptions, RenewalSchedule};

fn main() -> seedsim::Result<()> {
    let model = SeedingModel::new(ParameterSet::table1(), StimulusSignal::default());
    let schedule = RenewalSchedule::every_three_days();
    let opts = IntegratorOptions::default();
    let y0 = OdeState::seeding_initial();

    let plain = integrate(&model, y0, 0.0, 504.0, None, &opts)?;
    let renewed = integrate(&model, y0, 0.0, 504.0, Some(&schedule), &opts)?;
    println!("renewal events at {:?} h", renewed.events);

    println!(
        "\n{:>6} {:>22} {:>22}",
        "t [h]", "c2 (plain / renewed)", "tau (plain / renewed)"
    );
    for day in (0..=21).step_by(3) {
        let t = 24.0 * day as f64;
        // Event times carry two samples; take the post-event one.
        let a = plain.samples.iter().rev().find(|s| s.t == t).unwrap();
        let b = renewed.samples.iter().rev().find(|s| s.t == t).unwrap();
        println!(
            "{t:>6} {:>10.3e} / {:<10.3e} {:>10.3e} / {:<10.3e}",
            a.y[1], b.y[1], a.y[4], b.y[4]
        );
    }
    Ok(())
}
