//! Reaction-diffusion-taxis model on the circular scaffold.
//!
//! Cell-centred finite volumes on a masked uniform grid. Every flux through
//! a face to a masked-out cell is zero, which gives the no-flux boundary
//! condition for `c1`, `c2` and `chi` and exact discrete mass conservation of
//! the transport terms. The divergence-of-tensor terms in the boundary
//! conditions vanish because the tensors are constant in space.

mod banded;
mod field;
mod grid;
mod operator;
pub mod output;
mod run;
mod stepper;
mod taxis;

pub use banded::BandedCholesky;
pub use field::{init_fields, seeding_bump, Field, FieldState, SEED_PEAK};
pub use grid::ScaffoldGrid;
pub use operator::{diffusion_flux, DiffusionOperator, ImplicitDiffusion, SOLVE_RTOL};
pub use run::{run, PdeRun, ProbeSeries, RunSchedule};
pub use stepper::{PdeSetup, PdeStepper, TimeScheme};
pub use taxis::{taxis_flux, upwind_flux, TaxisCoefficient, TaxisMode};

/// Weighted second-moment ellipse of a non-negative field: returns the
/// centroid and the angle (radians, in `(-π/2, π/2]`) of the major axis.
pub fn moment_ellipse(grid: &ScaffoldGrid, values: &[f64]) -> ((f64, f64), f64) {
    let mut w = 0.0;
    let (mut mx, mut my) = (0.0, 0.0);
    for (k, &v) in values.iter().enumerate() {
        let v = v.max(0.0);
        let (x, y) = grid.center(k);
        w += v;
        mx += v * x;
        my += v * y;
    }
    let (cx, cy) = (mx / w, my / w);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (k, &v) in values.iter().enumerate() {
        let v = v.max(0.0);
        let (x, y) = grid.center(k);
        let (dx, dy) = (x - cx, y - cy);
        sxx += v * dx * dx;
        syy += v * dy * dy;
        sxy += v * dx * dy;
    }
    let cov = nalgebra::Matrix2::new(sxx, sxy, sxy, syy) / w;
    ((cx, cy), crate::fiber::principal_angle(&cov))
}
