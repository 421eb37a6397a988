//! Small dense LU factorization on fixed-size arrays.

/// Row-pivoted LU factors of an `N x N` matrix.
pub(crate) struct Lu<const N: usize> {
    lu: [[f64; N]; N],
    perm: [usize; N],
}

impl<const N: usize> Lu<N> {
    /// `None` when a pivot is exactly zero or non-finite.
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn factor(mut a: [[f64; N]; N]) -> Option<Self> {
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        for k in 0..N {
            let mut piv = k;
            for i in k + 1..N {
                if a[i][k].abs() > a[piv][k].abs() {
                    piv = i;
                }
            }
            if a[piv][k] == 0.0 || !a[piv][k].is_finite() {
                return None;
            }
            a.swap(k, piv);
            perm.swap(k, piv);
            for i in k + 1..N {
                let m = a[i][k] / a[k][k];
                a[i][k] = m;
                for j in k + 1..N {
                    a[i][j] -= m * a[k][j];
                }
            }
        }
        Some(Self { lu: a, perm })
    }

    pub(crate) fn solve(&self, b: &[f64; N]) -> [f64; N] {
        let mut x = [0.0; N];
        for i in 0..N {
            x[i] = b[self.perm[i]];
        }
        for i in 0..N {
            for j in 0..i {
                x[i] -= self.lu[i][j] * x[j];
            }
        }
        for i in (0..N).rev() {
            for j in i + 1..N {
                x[i] -= self.lu[i][j] * x[j];
            }
            x[i] /= self.lu[i][i];
        }
        x
    }
}

/// `I - s * J`.
pub(crate) fn shifted_identity<const N: usize>(j: &[[f64; N]; N], s: f64) -> [[f64; N]; N] {
    let mut m = [[0.0; N]; N];
    for r in 0..N {
        for c in 0..N {
            m[r][c] = if r == c { 1.0 } else { 0.0 } - s * j[r][c];
        }
    }
    m
}
