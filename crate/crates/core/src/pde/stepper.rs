//! Time stepping for the spatial model.
//!
//! Diffusion is always implicit Euler with factorizations computed once.
//! Reactions are either explicit (`Imex`) or solved cell-wise by implicit
//! Euler before the transport substep (`SplitImplicit`). Taxis is explicit.
//! Hyaluron and ECM have no spatial operator.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{reaction, OdeState, ParameterSet, SeedingModel, StimulusSignal};
use crate::ode::{implicit_euler_step, RenewalSchedule};

use super::field::FieldState;
use super::grid::ScaffoldGrid;
use super::operator::{DiffusionOperator, ImplicitDiffusion};
use super::taxis::{taxis_flux, TaxisCoefficient, TaxisMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeScheme {
    /// Explicit reactions and taxis, implicit diffusion.
    Imex,
    /// Cell-wise implicit Euler reactions, then explicit taxis and implicit
    /// diffusion.
    SplitImplicit,
}

/// Everything the stepper needs besides the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeSetup {
    pub params: ParameterSet,
    pub stimulus: StimulusSignal,
    /// Planar hMSC diffusion tensor, um²/h.
    pub d1: Matrix2<f64>,
    /// Planar chondrocyte diffusion tensor, um²/h.
    pub d2: Matrix2<f64>,
    pub taxis: TaxisMode,
    pub reactions: bool,
    pub scheme: TimeScheme,
    pub dt: f64,
    pub renewal: Option<RenewalSchedule>,
}

#[derive(Debug, Clone)]
pub struct PdeStepper {
    grid: ScaffoldGrid,
    model: SeedingModel,
    coeff: TaxisCoefficient,
    reactions: bool,
    scheme: TimeScheme,
    dt: f64,
    renewal: Option<RenewalSchedule>,
    diff_c1: ImplicitDiffusion,
    diff_c2: ImplicitDiffusion,
    diff_chi: ImplicitDiffusion,
}

impl PdeStepper {
    pub fn new(grid: ScaffoldGrid, setup: &PdeSetup) -> Result<Self> {
        setup.params.validate()?;
        if !(setup.dt > 0.0) || !setup.dt.is_finite() {
            return Err(Error::Config(format!(
                "dt must be positive, got {}",
                setup.dt
            )));
        }
        if let Some(r) = &setup.renewal {
            r.validate()?;
        }
        let coeff = TaxisCoefficient::new(setup.taxis, &setup.params, &setup.d1)?;
        let chi_tensor = Matrix2::identity() * setup.params.d_chi;
        let diff_c1 = DiffusionOperator::new(&grid, &setup.d1)?.implicit(setup.dt)?;
        let diff_c2 = DiffusionOperator::new(&grid, &setup.d2)?.implicit(setup.dt)?;
        let diff_chi = DiffusionOperator::new(&grid, &chi_tensor)?.implicit(setup.dt)?;
        Ok(Self {
            grid,
            model: SeedingModel::new(setup.params.clone(), setup.stimulus),
            coeff,
            reactions: setup.reactions,
            scheme: setup.scheme,
            dt: setup.dt,
            renewal: setup.renewal,
            diff_c1,
            diff_c2,
            diff_chi,
        })
    }

    pub fn grid(&self) -> &ScaffoldGrid {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn renewal(&self) -> Option<&RenewalSchedule> {
        self.renewal.as_ref()
    }

    pub fn model(&self) -> &SeedingModel {
        &self.model
    }

    /// Advances `state` by one step of size `dt`.
    pub fn step(&self, state: &FieldState) -> Result<FieldState> {
        let n = self.grid.len();
        if state.len() != n {
            return Err(Error::Config(format!(
                "field has {} cells, grid has {n}",
                state.len()
            )));
        }
        let dt = self.dt;
        let t1 = state.t + dt;
        let p = &self.model.params;
        let mut next = state.clone();
        next.t = t1;

        match self.scheme {
            TimeScheme::Imex => {
                if self.reactions {
                    let s = self.model.stimulus.value(state.t);
                    for k in 0..n {
                        let y = state.cell(k);
                        let r = reaction(s, &y, p);
                        next.set_cell(
                            k,
                            OdeState::new(
                                y.c1 + dt * r.c1,
                                y.c2 + dt * r.c2,
                                y.chi + dt * r.chi,
                                y.h + dt * r.h,
                                y.tau + dt * r.tau,
                            ),
                        );
                    }
                }
                let taxis = taxis_flux(&state.c1, &state.h, &state.tau, &self.coeff, &self.grid, p);
                add_scaled(&mut next.c1, &taxis, dt);
            }
            TimeScheme::SplitImplicit => {
                if self.reactions {
                    for k in 0..n {
                        let (y, _) =
                            implicit_euler_step(&self.model, t1, &state.cell(k).to_array(), dt)?;
                        next.set_cell(k, OdeState::from_array(y));
                    }
                }
                let taxis = taxis_flux(&next.c1, &next.h, &next.tau, &self.coeff, &self.grid, p);
                add_scaled(&mut next.c1, &taxis, dt);
            }
        }

        self.diff_c1.solve_in_place(&mut next.c1)?;
        self.diff_c2.solve_in_place(&mut next.c2)?;
        self.diff_chi.solve_in_place(&mut next.chi)?;

        if !next.is_finite() {
            return Err(Error::NonFinite {
                what: "PDE field",
                t: t1,
            });
        }
        Ok(next)
    }

    /// Applies a medium renewal to every cell.
    pub fn renew(&self, state: &mut FieldState) {
        if let Some(r) = &self.renewal {
            for k in 0..state.len() {
                let y = r.apply(&state.cell(k));
                state.chi[k] = y.chi;
            }
        }
    }
}

fn add_scaled(dst: &mut [f64], src: &[f64], s: f64) {
    for (d, v) in dst.iter_mut().zip(src) {
        *d += s * v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(scheme: TimeScheme) -> PdeSetup {
        let d = Matrix2::new(0.204, 0.189, 0.189, 0.447) * 1e6;
        PdeSetup {
            params: ParameterSet::table1(),
            stimulus: StimulusSignal::default(),
            d1: d,
            d2: d,
            taxis: TaxisMode::Identity,
            reactions: true,
            scheme,
            dt: 0.1,
            renewal: None,
        }
    }

    #[test]
    fn empty_cells_leave_medium_and_hyaluron_alone() {
        let grid = ScaffoldGrid::scaffold_disk(250.0).unwrap();
        let n = grid.len();
        for scheme in [TimeScheme::Imex, TimeScheme::SplitImplicit] {
            let stepper = PdeStepper::new(grid.clone(), &setup(scheme)).unwrap();
            let s0 = FieldState::uniform(n, OdeState::new(0.0, 0.0, 1e-3, 995.5, 0.0));
            let s1 = stepper.step(&s0).unwrap();
            for k in 0..n {
                assert!((s1.chi[k] - 1e-3).abs() < 1e-17);
                assert_eq!(s1.h[k], 995.5);
                assert_eq!(s1.c1[k], 0.0);
            }
        }
    }

    #[test]
    fn imex_uniform_step_is_explicit_euler() {
        let grid = ScaffoldGrid::scaffold_disk(250.0).unwrap();
        let stepper = PdeStepper::new(grid.clone(), &setup(TimeScheme::Imex)).unwrap();
        let y0 = OdeState::seeding_initial();
        let s1 = stepper.step(&FieldState::uniform(grid.len(), y0)).unwrap();
        let f = stepper.model().rhs(0.0, &y0).unwrap();
        let expect = [
            y0.c1 + 0.1 * f.c1,
            y0.c2 + 0.1 * f.c2,
            y0.chi + 0.1 * f.chi,
            y0.h + 0.1 * f.h,
            y0.tau + 0.1 * f.tau,
        ];
        for k in 0..grid.len() {
            let got = s1.cell(k).to_array();
            for i in 0..5 {
                assert!((got[i] - expect[i]).abs() <= 1e-12 * expect[i].abs().max(1e-30));
            }
        }
    }

    #[test]
    fn split_uniform_step_is_implicit_euler() {
        let grid = ScaffoldGrid::scaffold_disk(250.0).unwrap();
        let stepper = PdeStepper::new(grid.clone(), &setup(TimeScheme::SplitImplicit)).unwrap();
        let y0 = OdeState::seeding_initial();
        let s1 = stepper.step(&FieldState::uniform(grid.len(), y0)).unwrap();
        let (expect, _) = implicit_euler_step(stepper.model(), 0.1, &y0.to_array(), 0.1).unwrap();
        for k in 0..grid.len() {
            let got = s1.cell(k).to_array();
            for i in 0..5 {
                assert!(
                    (got[i] - expect[i]).abs() <= 1e-10 * expect[i].abs(),
                    "component {i}: {} vs {}",
                    got[i],
                    expect[i]
                );
            }
        }
    }

    #[test]
    fn pure_diffusion_step_conserves_c2() {
        let grid = ScaffoldGrid::scaffold_disk(100.0).unwrap();
        let mut s = setup(TimeScheme::Imex);
        s.reactions = false;
        s.taxis = TaxisMode::Off;
        let stepper = PdeStepper::new(grid.clone(), &s).unwrap();
        let mut state = crate::pde::init_fields(&grid, 1);
        state.c2 = state.c1.clone();
        let before = state.total(crate::pde::Field::C2, &grid);
        let after = stepper
            .step(&state)
            .unwrap()
            .total(crate::pde::Field::C2, &grid);
        assert!((after - before).abs() <= 1e-10 * before);
    }

    #[test]
    fn rejects_mismatched_field() {
        let grid = ScaffoldGrid::scaffold_disk(250.0).unwrap();
        let stepper = PdeStepper::new(grid, &setup(TimeScheme::Imex)).unwrap();
        assert!(stepper
            .step(&FieldState::uniform(3, OdeState::default()))
            .is_err());
    }
}
