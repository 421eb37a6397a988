//! Early anisotropic spreading on the scaffold disk: the chondrocyte field
//! elongates along the dominant fiber direction.
//!
//! cargo run --release --example pde_spread

use seedsim::fiber::{build_tensors, principal_angle, restrict_2d, table1_moment};
use seedsim::model::{ParameterSet, StimulusSignal};
use seedsim::pde::{
    init_fields, moment_ellipse, run, Field, PdeSetup, PdeStepper, RunSchedule, ScaffoldGrid,
    TaxisMode, TimeScheme,
};

fn main() -> seedsim::Result<()> {
    let params = ParameterSet::table1();
    let t = build_tensors(&table1_moment(), &params);
    let (d1, d2) = (restrict_2d(&t.d1), restrict_2d(&t.d2));
    let grid = ScaffoldGrid::scaffold_disk(50.0)?;
    println!(
        "{} x {} grid, {} cells inside the disk",
        grid.nx(),
        grid.ny(),
        grid.len()
    );

    let setup = PdeSetup {
        params,
        stimulus: StimulusSignal::default(),
        d1,
        d2,
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
            t_end: 2.0,
            snapshot_times: vec![0.5, 1.0, 2.0],
            probe: ScaffoldGrid::DISK_CENTER,
        },
    )?;

    println!(
        "dominant tensor direction: {:.2} deg",
        principal_angle(&d2).to_degrees()
    );
    for snap in &result.snapshots {
        let c2 = snap.get(Field::C2);
        let (centre, angle) = moment_ellipse(&grid, c2);
        println!(
            "t = {:>3} h: c2 mass {:.4e}, centroid ({:.1}, {:.1}), major axis {:.2} deg",
            snap.t,
            snap.total(Field::C2, &grid),
            centre.0,
            centre.1,
            angle.to_degrees()
        );
    }
    Ok(())
}
