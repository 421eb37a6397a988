use crate::error::{Error, Result};

const NO_CELL: u32 = u32::MAX;

/// Uniform Cartesian grid with a mask selecting the simulated cells.
///
/// Cells are numbered row by row (y outer, x inner) over the masked set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaffoldGrid {
    nx: usize,
    ny: usize,
    dx: f64,
    /// Centre of grid cell (0, 0), um.
    origin: (f64, f64),
    index: Vec<u32>,
    cells: Vec<(usize, usize)>,
}

impl ScaffoldGrid {
    pub const DISK_CENTER: (f64, f64) = (2500.0, 2500.0);
    pub const DISK_RADIUS: f64 = 2500.0;

    /// The circular scaffold of radius 2500 um centred at (2500, 2500) um.
    pub fn scaffold_disk(dx: f64) -> Result<Self> {
        Self::disk(Self::DISK_CENTER, Self::DISK_RADIUS, dx)
    }

    /// Cells whose centres lie in the closed disk. One cell is centred
    /// exactly on `center`.
    pub fn disk(center: (f64, f64), radius: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0) || !(radius > 0.0) || !dx.is_finite() || !radius.is_finite() {
            return Err(Error::Config(format!(
                "grid needs dx > 0 and radius > 0 (dx = {dx}, radius = {radius})"
            )));
        }
        let half = (radius / dx).ceil() as usize;
        let n = 2 * half + 1;
        let origin = (center.0 - half as f64 * dx, center.1 - half as f64 * dx);
        let r2 = radius * radius * (1.0 + 1e-12);
        let mut mask = vec![false; n * n];
        for j in 0..n {
            for i in 0..n {
                let x = (i as f64 - half as f64) * dx;
                let y = (j as f64 - half as f64) * dx;
                mask[j * n + i] = x * x + y * y <= r2;
            }
        }
        Self::from_mask(n, n, dx, origin, &mask)
    }

    /// Arbitrary mask over an `nx` by `ny` grid (`mask[j * nx + i]`). Cells
    /// without a masked 4-neighbour are dropped, unless the mask has only
    /// that one cell.
    pub fn from_mask(
        nx: usize,
        ny: usize,
        dx: f64,
        origin: (f64, f64),
        mask: &[bool],
    ) -> Result<Self> {
        if mask.len() != nx * ny {
            return Err(Error::Config(format!(
                "mask has {} entries, expected {}",
                mask.len(),
                nx * ny
            )));
        }
        if !(dx > 0.0) {
            return Err(Error::Config(format!("dx must be positive, got {dx}")));
        }
        let count = mask.iter().filter(|&&m| m).count();
        let at = |i: isize, j: isize| -> bool {
            i >= 0
                && j >= 0
                && (i as usize) < nx
                && (j as usize) < ny
                && mask[j as usize * nx + i as usize]
        };
        let mut index = vec![NO_CELL; nx * ny];
        let mut cells = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                if !mask[j * nx + i] {
                    continue;
                }
                let (ii, jj) = (i as isize, j as isize);
                let connected =
                    at(ii - 1, jj) || at(ii + 1, jj) || at(ii, jj - 1) || at(ii, jj + 1);
                if connected || count == 1 {
                    index[j * nx + i] = cells.len() as u32;
                    cells.push((i, j));
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::Config("grid mask selects no cells".into()));
        }
        Ok(Self {
            nx,
            ny,
            dx,
            origin,
            index,
            cells,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dx
    }

    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    /// Number of simulated cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Grid indices `(i, j)` of simulated cell `k`.
    pub fn cell(&self, k: usize) -> (usize, usize) {
        self.cells[k]
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    /// Simulated-cell number at grid indices, if masked in.
    pub fn index(&self, i: isize, j: isize) -> Option<usize> {
        if i < 0 || j < 0 || i as usize >= self.nx || j as usize >= self.ny {
            return None;
        }
        match self.index[j as usize * self.nx + i as usize] {
            NO_CELL => None,
            k => Some(k as usize),
        }
    }

    pub fn center(&self, k: usize) -> (f64, f64) {
        let (i, j) = self.cells[k];
        (
            self.origin.0 + i as f64 * self.dx,
            self.origin.1 + j as f64 * self.dx,
        )
    }

    /// Simulated cell containing the point, if any.
    pub fn locate(&self, x: f64, y: f64) -> Option<usize> {
        let i = ((x - self.origin.0) / self.dx + 0.5).floor();
        let j = ((y - self.origin.1) / self.dx + 0.5).floor();
        self.index(i as isize, j as isize)
    }
}
