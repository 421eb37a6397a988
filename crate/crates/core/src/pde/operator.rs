//! Cell-centred finite-volume operator for `div(D grad c)` with a constant
//! symmetric tensor `D` and zero flux through every masked-out face.
//!
//! The operator is the negative gradient of the discrete energy
//!
//! ```text
//! E(c) = 1/2 Σ_xfaces Dxx δx² + 1/2 Σ_yfaces Dyy δy² + Σ_vertices Dxy X Y
//! ```
//!
//! where the vertex sum runs over grid corners whose four surrounding cells
//! are all simulated, and `X`, `Y` are the averaged differences across that
//! corner. In the interior this is the usual nine-point stencil. The matrix
//! is symmetric, positive semi-definite whenever `D` is, and has zero row
//! sums, so the scheme conserves mass exactly.

use nalgebra::Matrix2;

use crate::error::{Error, Result};

use super::banded::BandedCholesky;
use super::grid::ScaffoldGrid;

/// Relative residual accepted from the implicit solve.
pub const SOLVE_RTOL: f64 = 1e-10;

/// Sparse symmetric stiffness matrix `K` with `div(D grad c) ≈ -K c`.
#[derive(Debug, Clone)]
pub struct DiffusionOperator {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    bandwidth: usize,
    tensor: Matrix2<f64>,
}

impl DiffusionOperator {
    pub fn new(grid: &ScaffoldGrid, d: &Matrix2<f64>) -> Result<Self> {
        check_tensor(d)?;
        let n = grid.len();
        let h2 = grid.dx() * grid.dx();
        let (dxx, dyy, dxy) = (
            d[(0, 0)] / h2,
            d[(1, 1)] / h2,
            0.5 * (d[(0, 1)] + d[(1, 0)]) / h2,
        );

        // 3x3 neighbourhood per row, slot (dj + 1) * 3 + (di + 1)
        let mut rows = vec![[0.0f64; 9]; n];
        let mut used = vec![[false; 9]; n];
        let mut add = |p: usize, pij: (usize, usize), qij: (usize, usize), v: f64| {
            let di = qij.0 as isize - pij.0 as isize;
            let dj = qij.1 as isize - pij.1 as isize;
            let slot = ((dj + 1) * 3 + (di + 1)) as usize;
            rows[p][slot] += v;
            used[p][slot] = true;
        };

        for (p, &(i, j)) in grid.cells().iter().enumerate() {
            let (ii, jj) = (i as isize, j as isize);
            // faces to the east and north, each visited once
            for (di, dj, coef) in [(1isize, 0isize, dxx), (0, 1, dyy)] {
                if let Some(q) = grid.index(ii + di, jj + dj) {
                    let qij = grid.cell(q);
                    add(p, (i, j), (i, j), coef);
                    add(q, qij, qij, coef);
                    add(p, (i, j), qij, -coef);
                    add(q, qij, (i, j), -coef);
                }
            }
            // corner to the north-east of p, with p as its south-west cell
            if dxy != 0.0 {
                let corner = [
                    Some(p),
                    grid.index(ii + 1, jj),
                    grid.index(ii, jj + 1),
                    grid.index(ii + 1, jj + 1),
                ];
                if let [Some(sw), Some(se), Some(nw), Some(ne)] = corner {
                    let ids = [sw, se, nw, ne];
                    let local = [
                        [1.0, 0.0, 0.0, -1.0],
                        [0.0, -1.0, 1.0, 0.0],
                        [0.0, 1.0, -1.0, 0.0],
                        [-1.0, 0.0, 0.0, 1.0],
                    ];
                    for a in 0..4 {
                        for b in 0..4 {
                            if local[a][b] != 0.0 {
                                let (pa, pb) = (ids[a], ids[b]);
                                add(pa, grid.cell(pa), grid.cell(pb), 0.5 * dxy * local[a][b]);
                            }
                        }
                    }
                }
            }
        }

        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(9 * n);
        let mut vals = Vec::with_capacity(9 * n);
        let mut bandwidth = 0usize;
        row_ptr.push(0);
        for (p, &(i, j)) in grid.cells().iter().enumerate() {
            for slot in 0..9 {
                if !used[p][slot] {
                    continue;
                }
                let di = (slot % 3) as isize - 1;
                let dj = (slot / 3) as isize - 1;
                let q = grid
                    .index(i as isize + di, j as isize + dj)
                    .expect("stencil entry refers to a simulated cell");
                cols.push(q);
                vals.push(rows[p][slot]);
                bandwidth = bandwidth.max(p.abs_diff(q));
            }
            row_ptr.push(cols.len());
        }
        Ok(Self {
            row_ptr,
            cols,
            vals,
            bandwidth,
            tensor: *d,
        })
    }

    pub fn dim(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn tensor(&self) -> &Matrix2<f64> {
        &self.tensor
    }

    /// `K c`.
    pub fn stiffness_times(&self, c: &[f64], out: &mut [f64]) {
        for (p, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[p]..self.row_ptr[p + 1] {
                s += self.vals[k] * c[self.cols[k]];
            }
            *o = s;
        }
    }

    /// Discrete `div(D grad c)` per cell (per unit area).
    pub fn divergence(&self, c: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; c.len()];
        self.stiffness_times(c, &mut out);
        out.iter_mut().for_each(|v| *v = -*v);
        out
    }

    pub fn entry(&self, p: usize, q: usize) -> f64 {
        (self.row_ptr[p]..self.row_ptr[p + 1])
            .find(|&k| self.cols[k] == q)
            .map_or(0.0, |k| self.vals[k])
    }

    /// Factors `I + dt K` for repeated implicit Euler solves.
    pub fn implicit(&self, dt: f64) -> Result<ImplicitDiffusion> {
        if !(dt > 0.0) {
            return Err(Error::Config(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let n = self.dim();
        let bw = self.bandwidth;
        // dense band copy of the lower triangle for the factorization
        let w = bw + 1;
        let mut lower = vec![0.0; n * w];
        for p in 0..n {
            for k in self.row_ptr[p]..self.row_ptr[p + 1] {
                let q = self.cols[k];
                if q <= p {
                    lower[p * w + (q + bw - p)] = dt * self.vals[k];
                }
            }
            lower[p * w + bw] += 1.0;
        }
        let chol = BandedCholesky::factor(n, bw, |i, j| lower[i * w + (j + bw - i)])?;
        Ok(ImplicitDiffusion {
            op: self.clone(),
            dt,
            chol,
        })
    }
}

fn check_tensor(d: &Matrix2<f64>) -> Result<()> {
    if !d.iter().all(|v| v.is_finite()) {
        return Err(Error::Config(
            "diffusion tensor has non-finite entries".into(),
        ));
    }
    let scale = d.amax().max(f64::MIN_POSITIVE);
    if (d[(0, 1)] - d[(1, 0)]).abs() > 1e-12 * scale {
        return Err(Error::Config(format!(
            "diffusion tensor is not symmetric: {d:?}"
        )));
    }
    let det = d[(0, 0)] * d[(1, 1)] - d[(0, 1)] * d[(1, 0)];
    if d[(0, 0)] < 0.0 || d[(1, 1)] < 0.0 || det < -1e-12 * scale * scale {
        return Err(Error::Config(format!(
            "diffusion tensor is not positive semi-definite: {d:?}"
        )));
    }
    Ok(())
}

/// Reusable solver for `(I + dt K) c_new = rhs`.
#[derive(Debug, Clone)]
pub struct ImplicitDiffusion {
    op: DiffusionOperator,
    dt: f64,
    chol: BandedCholesky,
}

impl ImplicitDiffusion {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn operator(&self) -> &DiffusionOperator {
        &self.op
    }

    /// Overwrites `x` (holding the right-hand side) with the solution and
    /// checks the relative residual.
    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let rhs = x.to_vec();
        self.chol.solve_in_place(x);
        let mut kx = vec![0.0; x.len()];
        self.op.stiffness_times(x, &mut kx);
        let mut r2 = 0.0;
        let mut b2 = 0.0;
        for i in 0..x.len() {
            let r = rhs[i] - (x[i] + self.dt * kx[i]);
            r2 += r * r;
            b2 += rhs[i] * rhs[i];
        }
        let rel = if b2 > 0.0 {
            (r2 / b2).sqrt()
        } else {
            r2.sqrt()
        };
        if !(rel <= SOLVE_RTOL) {
            return Err(Error::LinearSolve {
                residual: rel,
                tolerance: SOLVE_RTOL,
            });
        }
        Ok(())
    }
}

/// Divergence of the diffusive flux for one field; builds the operator on
/// each call, so prefer [`DiffusionOperator`] inside loops.
pub fn diffusion_flux(field: &[f64], d: &Matrix2<f64>, grid: &ScaffoldGrid) -> Result<Vec<f64>> {
    Ok(DiffusionOperator::new(grid, d)?.divergence(field))
}
