//! Parameters, state types, rate functions and the reaction right-hand side
//! shared by the ODE and PDE solvers.

mod params;
pub mod rates;
mod rhs;
mod state;

pub use params::{ParameterSet, DEFAULT_CHI_C};
pub use rates::{
    adhesion, alpha1_chi, alpha1_s, alpha1_s_slope, alpha2_chi, alpha2_s, alpha2_s_slope,
};
pub use rhs::{ode_rhs, reaction, reaction_jacobian, SeedingModel};
pub use state::{OdeState, StimulusSignal};
