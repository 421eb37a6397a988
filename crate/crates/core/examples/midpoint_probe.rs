//! Six days of the spatial model, reported at the scaffold midpoint and
//! compared with the well-mixed model.
//!
//! cargo run --release --example midpoint_probe

use seedsim::fiber::{build_tensors, restrict_2d, table1_moment};
use seedsim::model::{OdeState, ParameterSet, SeedingModel, StimulusSignal};
use seedsim::ode::{integrate, IntegratorOptions};
use seedsim::pde::{
    init_fields, run, PdeSetup, PdeStepper, RunSchedule, ScaffoldGrid, TaxisMode, TimeScheme,
};

fn main() -> seedsim::Result<()> {
    let params = ParameterSet::table1();
    let stimulus = StimulusSignal::default();
    let t = build_tensors(&table1_moment(), &params);
    let grid = ScaffoldGrid::scaffold_disk(50.0)?;
    let setup = PdeSetup {
        params: params.clone(),
        stimulus,
        d1: restrict_2d(&t.d1),
        d2: restrict_2d(&t.d2),
        taxis: TaxisMode::Identity,
        reactions: true,
        scheme: TimeScheme::Imex,
        dt: 0.1,
        renewal: None,
    };
    let stepper = PdeStepper::new(grid.clone(), &setup)?;
    let result = run(
        &stepper,
        init_fields(&grid, 1),
        &RunSchedule {
            t_end: 144.0,
            snapshot_times: vec![],
            probe: ScaffoldGrid::DISK_CENTER,
        },
    )?;

    let ode = integrate(
        &SeedingModel::new(params, stimulus),
        OdeState::seeding_initial(),
        0.0,
        144.0,
        None,
        &IntegratorOptions::default(),
    )?;

    println!(
        "{:>6} {:>22} {:>22} {:>22}",
        "t [h]", "c1 (pde / ode)", "c2 (pde / ode)", "tau (pde / ode)"
    );
    for t in [
        0.0, 1.0, 2.0, 6.0, 12.0, 24.0, 48.0, 72.0, 96.0, 120.0, 144.0,
    ] {
        let p = result.probe.at_time(t).unwrap();
        let o = ode.samples.iter().find(|s| s.t == t).unwrap().y;
        println!(
            "{t:>6} {:>10.3e} / {:<10.3e} {:>10.3e} / {:<10.3e} {:>10.3e} / {:<10.3e}",
            p.c1, o[0], p.c2, o[1], p.tau, o[4]
        );
    }
    println!(
        "smallest field value during the run: {:e}",
        result.min_value
    );
    Ok(())
}
