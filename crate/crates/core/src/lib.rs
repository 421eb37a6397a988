//! Simulation toolkit for cell seeding in porous scaffolds.
//!
//! Two models share one set of reaction kinetics:
//!
//! - a well-mixed ODE model for hMSC density `c1`, chondrocyte density `c2`,
//!   differentiation medium `chi`, hyaluron `h` and ECM density `tau`
//!   ([`model`], [`ode`]);
//! - a 2D reaction-diffusion-taxis model on a circular scaffold with
//!   anisotropic cell diffusion derived from the fiber orientation
//!   distribution ([`fiber`], [`pde`]).
//!
//! [`config`] and [`experiment`] turn a TOML run description into CSV output.
//! Runnable walkthroughs live in the crate's `examples/` directory.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
mod csvnum;
pub mod error;
pub mod experiment;
pub mod fiber;
pub mod model;
pub mod ode;
pub mod pde;

pub use error::{Error, Result};
