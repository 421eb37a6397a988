//! Cholesky factorization of symmetric positive-definite band matrices.

use crate::error::{Error, Result};

/// Lower band factor `L` with `A = L Lᵀ`, stored row-wise: row `i` holds
/// columns `i - bw ..= i`.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    band: Vec<f64>,
}

impl BandedCholesky {
    /// Factors the band matrix given by `entry(i, j)` for `i - bw <= j <= i`.
    pub fn factor(n: usize, bw: usize, entry: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let w = bw + 1;
        let mut band = vec![0.0; n * w];
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                band[i * w + (j + bw - i)] = entry(i, j);
            }
        }
        for i in 0..n {
            let lo_i = i.saturating_sub(bw);
            for j in lo_i..=i {
                let lo = lo_i.max(j.saturating_sub(bw));
                let mut sum = band[i * w + (j + bw - i)];
                for k in lo..j {
                    sum -= band[i * w + (k + bw - i)] * band[j * w + (k + bw - j)];
                }
                if i == j {
                    if !(sum > 0.0) {
                        return Err(Error::LinearSolve {
                            residual: f64::NAN,
                            tolerance: 0.0,
                        });
                    }
                    band[i * w + bw] = sum.sqrt();
                } else {
                    band[i * w + (j + bw - i)] = sum / band[j * w + bw];
                }
            }
        }
        Ok(Self { n, bw, band })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let row = &self.band[i * w..(i + 1) * w];
            let mut s = x[i];
            for k in lo..i {
                s -= row[k + bw - i] * x[k];
            }
            x[i] = s / row[bw];
        }
        for i in (0..n).rev() {
            x[i] /= self.band[i * w + bw];
            let xi = x[i];
            let lo = i.saturating_sub(bw);
            let row = &self.band[i * w..(i + 1) * w];
            for k in lo..i {
                x[k] -= row[k + bw - i] * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_system() {
        // A = tridiag(-1, 4, -1), x = (1..=6)
        let n = 6;
        let entry = |i: usize, j: usize| if i == j { 4.0 } else { -1.0 };
        let chol = BandedCholesky::factor(n, 1, entry).unwrap();
        let x: Vec<f64> = (1..=n).map(|v| v as f64).collect();
        let mut b = vec![0.0; n];
        for i in 0..n {
            b[i] = 4.0 * x[i];
            if i > 0 {
                b[i] -= x[i - 1];
            }
            if i + 1 < n {
                b[i] -= x[i + 1];
            }
        }
        chol.solve_in_place(&mut b);
        for i in 0..n {
            assert!((b[i] - x[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let entry = |i: usize, j: usize| if i == j { 1.0 } else { -2.0 };
        assert!(BandedCholesky::factor(3, 1, entry).is_err());
    }
}
