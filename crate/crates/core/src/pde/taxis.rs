//! Haptotactic drift of hMSCs up the gradient of the adhesion function.
//!
//! The flux is `c1 * M(B) * grad B` with either the identity mobility or
//! `M = k- λ11 / (B² (B + λ10)) * D1`. Face velocities are upwinded; faces
//! to masked-out cells carry no flux.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::rates::adhesion_unchecked;
use crate::model::ParameterSet;

use super::grid::ScaffoldGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaxisMode {
    Off,
    /// Mobility tensor replaced by the identity.
    Identity,
    /// `k- λ11 / (B² (B + λ10)) D1`.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TaxisCoefficient {
    Off,
    Identity,
    Full {
        k_minus: f64,
        lambda11: f64,
        lambda10: f64,
        d1: Matrix2<f64>,
    },
}

impl TaxisCoefficient {
    pub fn new(mode: TaxisMode, p: &ParameterSet, d1: &Matrix2<f64>) -> Result<Self> {
        Ok(match mode {
            TaxisMode::Off => Self::Off,
            TaxisMode::Identity => Self::Identity,
            TaxisMode::Full => {
                let (Some(k_minus), Some(lambda11)) = (p.k_minus, p.lambda11) else {
                    return Err(Error::Config(
                        "full taxis mode needs both k_minus and lambda11".into(),
                    ));
                };
                Self::Full {
                    k_minus,
                    lambda11,
                    lambda10: p.lambda10,
                    d1: *d1,
                }
            }
        })
    }

    pub fn is_off(&self) -> bool {
        matches!(self, Self::Off)
    }

    /// Scalar sensitivity multiplying `D1` in full mode.
    pub fn sensitivity(&self, b: f64) -> f64 {
        match *self {
            Self::Full {
                k_minus,
                lambda11,
                lambda10,
                ..
            } => k_minus * lambda11 / (b * b * (b + lambda10)),
            _ => 1.0,
        }
    }
}

/// Upwind flux through one face with normal velocity `u` (positive from the
/// `left` cell towards the `right` cell), per unit face length.
#[inline]
pub fn upwind_flux(u: f64, c_left: f64, c_right: f64) -> f64 {
    if u >= 0.0 {
        u * c_left
    } else {
        u * c_right
    }
}

/// Per-cell divergence contribution `-div(c1 M grad B)`, i.e. the rate of
/// change of `c1` due to taxis.
pub fn taxis_flux(
    c1: &[f64],
    h: &[f64],
    tau: &[f64],
    coeff: &TaxisCoefficient,
    grid: &ScaffoldGrid,
    p: &ParameterSet,
) -> Vec<f64> {
    let n = grid.len();
    let mut out = vec![0.0; n];
    if coeff.is_off() {
        return out;
    }
    let dx = grid.dx();
    let b: Vec<f64> = (0..n)
        .map(|k| adhesion_unchecked(h[k].max(0.0), tau[k].max(0.0), p))
        .collect();

    // cell-centred gradient of B, one-sided at the mask edge
    let grad = |k: usize| -> (f64, f64) {
        let (i, j) = grid.cell(k);
        let (i, j) = (i as isize, j as isize);
        let d = |minus: Option<usize>, plus: Option<usize>| match (minus, plus) {
            (Some(m), Some(q)) => (b[q] - b[m]) / (2.0 * dx),
            (None, Some(q)) => (b[q] - b[k]) / dx,
            (Some(m), None) => (b[k] - b[m]) / dx,
            (None, None) => 0.0,
        };
        (
            d(grid.index(i - 1, j), grid.index(i + 1, j)),
            d(grid.index(i, j - 1), grid.index(i, j + 1)),
        )
    };

    for k in 0..n {
        let (i, j) = grid.cell(k);
        for (axis, (di, dj)) in [(0usize, (1isize, 0isize)), (1, (0, 1))] {
            let Some(q) = grid.index(i as isize + di, j as isize + dj) else {
                continue;
            };
            let normal = (b[q] - b[k]) / dx;
            let u = match coeff {
                TaxisCoefficient::Off => unreachable!(),
                TaxisCoefficient::Identity => normal,
                TaxisCoefficient::Full { d1, .. } => {
                    let (gk, gq) = (grad(k), grad(q));
                    let other = 1 - axis;
                    let tangential = 0.5 * (if other == 0 { gk.0 + gq.0 } else { gk.1 + gq.1 });
                    let flux_dir = d1[(axis, axis)] * normal + d1[(axis, other)] * tangential;
                    coeff.sensitivity(0.5 * (b[k] + b[q])) * flux_dir
                }
            };
            let f = upwind_flux(u, c1[k], c1[q]) / dx;
            out[k] -= f;
            out[q] += f;
        }
    }
    out
}
