use std::fmt::Write as _;
use std::path::Path;

use crate::csvnum::Num;
use crate::error::{Error, Result};
use crate::model::OdeState;

/// Counters collected while integrating.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub steps: usize,
    pub rejected_steps: usize,
    pub newton_iterations: usize,
    pub rhs_evaluations: usize,
    pub jacobian_evaluations: usize,
    pub factorizations: usize,
}

/// One output sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
}

/// Ordered samples from `t0` to `t_end`.
///
/// Times strictly increase except at renewal events, where a pre-event and a
/// post-event sample share the event time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub samples: Vec<Sample<N>>,
    pub events: Vec<f64>,
    pub stats: SolverStats,
}

impl<const N: usize> Trajectory<N> {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    /// Component `i` over all samples.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s.y[i]).collect()
    }

    pub fn last(&self) -> &Sample<N> {
        self.samples
            .last()
            .expect("trajectory has at least one sample")
    }
}

impl Trajectory<5> {
    pub fn state(&self, i: usize) -> OdeState {
        OdeState::from_array(self.samples[i].y)
    }

    pub fn final_state(&self) -> OdeState {
        OdeState::from_array(self.last().y)
    }

    /// CSV text with columns `t,c1,c2,chi,h,tau`, preceded by a `#` line
    /// giving the units.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 96);
        out.push_str(ODE_UNITS_LINE);
        out.push('\n');
        out.push_str("t,c1,c2,chi,h,tau\n");
        for s in &self.samples {
            write!(out, "{}", Num(s.t)).unwrap();
            for v in s.y {
                write!(out, ",{}", Num(v)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

pub const ODE_UNITS_LINE: &str =
    "# units: t=h, c1=1/um^2, c2=1/um^2, chi=mol/um^2, h=mol/um^2, tau=mol/um^2";
