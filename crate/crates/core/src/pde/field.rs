use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::OdeState;

use super::grid::ScaffoldGrid;

/// The five model fields over the simulated cells at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub chi: Vec<f64>,
    pub h: Vec<f64>,
    pub tau: Vec<f64>,
}

/// Field selector, in output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    C1,
    C2,
    Chi,
    H,
    Tau,
}

impl Field {
    pub const ALL: [Field; 5] = [Field::C1, Field::C2, Field::Chi, Field::H, Field::Tau];

    pub fn name(self) -> &'static str {
        match self {
            Field::C1 => "c1",
            Field::C2 => "c2",
            Field::Chi => "chi",
            Field::H => "h",
            Field::Tau => "tau",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Field::C1 | Field::C2 => "1/um^2",
            _ => "mol/um^2",
        }
    }
}

impl FieldState {
    /// Every cell set to `y`.
    pub fn uniform(n: usize, y: OdeState) -> Self {
        Self {
            t: 0.0,
            c1: vec![y.c1; n],
            c2: vec![y.c2; n],
            chi: vec![y.chi; n],
            h: vec![y.h; n],
            tau: vec![y.tau; n],
        }
    }

    pub fn len(&self) -> usize {
        self.c1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c1.is_empty()
    }

    pub fn get(&self, field: Field) -> &[f64] {
        match field {
            Field::C1 => &self.c1,
            Field::C2 => &self.c2,
            Field::Chi => &self.chi,
            Field::H => &self.h,
            Field::Tau => &self.tau,
        }
    }

    pub fn cell(&self, k: usize) -> OdeState {
        OdeState::new(self.c1[k], self.c2[k], self.chi[k], self.h[k], self.tau[k])
    }

    pub fn set_cell(&mut self, k: usize, y: OdeState) {
        self.c1[k] = y.c1;
        self.c2[k] = y.c2;
        self.chi[k] = y.chi;
        self.h[k] = y.h;
        self.tau[k] = y.tau;
    }

    /// Integral of a field over the domain (sum times cell area).
    pub fn total(&self, field: Field, grid: &ScaffoldGrid) -> f64 {
        self.get(field).iter().sum::<f64>() * grid.cell_area()
    }

    pub fn is_finite(&self) -> bool {
        Field::ALL
            .iter()
            .all(|&f| self.get(f).iter().all(|v| v.is_finite()))
    }

    pub fn min_value(&self) -> f64 {
        Field::ALL
            .iter()
            .flat_map(|&f| self.get(f).iter().copied())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Peak value of the initial hMSC bump.
pub const SEED_PEAK: f64 = 0.001;

/// Initial hMSC density: Gaussian bump of height 0.001 centred on the disk.
pub fn seeding_bump(x: f64, y: f64) -> f64 {
    let u = (x - 2500.0) / 1000.0;
    let v = (y - 2500.0) / 1000.0;
    SEED_PEAK * (-15.0 * u * u - 15.0 * v * v).exp()
}

/// Initial fields of the spatial seeding experiment.
///
/// `h = 995 + r` with `r ~ U[0, 1)` drawn once per cell, in cell order, from
/// ChaCha8 seeded with `seed` (`rand_chacha::ChaCha8Rng::seed_from_u64`).
pub fn init_fields(grid: &ScaffoldGrid, seed: u64) -> FieldState {
    let n = grid.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = FieldState::uniform(n, OdeState::new(0.0, 0.0, 0.001, 0.0, 0.0));
    for k in 0..n {
        let (x, y) = grid.center(k);
        state.c1[k] = seeding_bump(x, y);
        state.h[k] = 995.0 + rng.random::<f64>();
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_bump_values() {
        let g = ScaffoldGrid::scaffold_disk(50.0).unwrap();
        let s = init_fields(&g, 7);
        let centre = g.locate(2500.0, 2500.0).unwrap();
        assert_eq!(s.c1[centre], 0.001);
        let off = g.locate(3500.0, 2500.0).unwrap();
        let expect = 0.001 * (-15.0f64).exp();
        assert!((s.c1[off] - expect).abs() < 1e-22);
        assert!((s.c1[off] - 3.059023205018258e-10).abs() < 1e-20);
        assert!(s.c2.iter().all(|&v| v == 0.0));
        assert!(s.chi.iter().all(|&v| v == 0.001));
        assert!(s.tau.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn hyaluron_noise_is_seeded() {
        let g = ScaffoldGrid::scaffold_disk(100.0).unwrap();
        let a = init_fields(&g, 42);
        let b = init_fields(&g, 42);
        let c = init_fields(&g, 43);
        assert_eq!(a, b);
        assert_ne!(a.h, c.h);
        assert!(a.h.iter().all(|&v| (995.0..996.0).contains(&v)));
        let mean = a.h.iter().sum::<f64>() / a.len() as f64;
        assert!((mean - 995.5).abs() < 0.05);
    }
}
