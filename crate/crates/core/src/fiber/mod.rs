//! Cell diffusion tensors from the fiber orientation distribution.
//!
//! Fibers follow an angular central Gaussian law with SPD parameter matrix
//! `A`. Its second-moment matrix `M` has, in the eigenbasis of `A`, the
//! diagonal entries
//!
//! ```text
//! M_ii = sqrt(b1 b2 b3) / 2 * ∫_0^∞ (b_i + z)^(-3/2) Π_{j≠i} (b_j + z)^(-1/2) dz
//! ```
//!
//! where `b` are the eigenvalues of `A^-1`, and zero off-diagonals. The
//! integral is mapped to `[0, π/2]` by `z = tan²θ`. `D1 = (s1²/λ10) M` and
//! `D2 = (λ10/λ2)(s2/s1)² D1`.

pub mod quadrature;

use nalgebra::{Matrix2, Matrix3, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::ParameterSet;

/// Absolute accuracy of each diagonal moment.
pub const MOMENT_ABS_TOL: f64 = 1e-12;
const MAX_INTERVALS: usize = 4000;

/// Published dimensionless moment block; `D1 = (s1²/λ10)` times this.
pub const TABLE1_MOMENT: [[f64; 3]; 3] = [
    [0.204, 0.189, 0.169],
    [0.189, 0.447, 0.251],
    [0.169, 0.251, 0.349],
];

/// Symmetric positive-definite ACG parameter matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientationMatrix(Matrix3<f64>);

impl OrientationMatrix {
    pub fn new(a: Matrix3<f64>) -> Result<Self> {
        if !a.iter().all(|v| v.is_finite()) {
            return Err(Error::NotSpd("non-finite entry".into()));
        }
        let asym = (a - a.transpose()).amax();
        if asym > 1e-12 {
            return Err(Error::NotSpd(format!("asymmetry {asym:e}")));
        }
        let min_eig = SymmetricEigen::new(a).eigenvalues.min();
        if !(min_eig > 0.0) {
            return Err(Error::NotSpd(format!("smallest eigenvalue {min_eig:e}")));
        }
        Ok(Self(a))
    }

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(Matrix3::from_fn(|r, c| rows[r][c]))
    }

    pub fn diagonal(d: [f64; 3]) -> Result<Self> {
        Self::new(Matrix3::from_diagonal(&d.into()))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    fn is_diagonal(&self) -> bool {
        let a = &self.0;
        a[(0, 1)] == 0.0 && a[(0, 2)] == 0.0 && a[(1, 2)] == 0.0
    }
}

/// Diagonal second moments for eigenvalues `b` of `A^-1`.
pub fn acg_moment_diag(b: [f64; 3]) -> Result<[f64; 3]> {
    if !b.iter().all(|&v| v > 0.0 && v.is_finite()) {
        return Err(Error::Domain {
            name: "b",
            value: b.iter().copied().fold(f64::INFINITY, f64::min),
            expected: "positive eigenvalues of A^-1",
        });
    }
    let prefactor = 0.5 * (b[0] * b[1] * b[2]).sqrt();
    let mut out = [0.0; 3];
    for (i, m) in out.iter_mut().enumerate() {
        let integrand = |theta: f64| {
            let (s, c) = theta.sin_cos();
            let (s2, c2) = (s * s, c * c);
            let mut den = 1.0;
            for (j, &bj) in b.iter().enumerate() {
                let q = bj * c2 + s2;
                den *= if j == i { q * q.sqrt() } else { q.sqrt() };
            }
            2.0 * s * c2 / den
        };
        let r = quadrature::integrate(
            integrand,
            0.0,
            std::f64::consts::FRAC_PI_2,
            MOMENT_ABS_TOL / prefactor,
            MAX_INTERVALS,
        )?;
        *m = prefactor * r.value;
    }
    Ok(out)
}

/// Second-moment matrix of the ACG distribution with parameter `a`.
pub fn acg_moment(a: &OrientationMatrix) -> Result<Matrix3<f64>> {
    if a.is_diagonal() {
        let d = a.matrix().diagonal();
        let m = acg_moment_diag([1.0 / d[0], 1.0 / d[1], 1.0 / d[2]])?;
        return Ok(Matrix3::from_diagonal(&m.into()));
    }
    let eig = SymmetricEigen::new(*a.matrix());
    let l = eig.eigenvalues;
    let m = acg_moment_diag([1.0 / l[0], 1.0 / l[1], 1.0 / l[2]])?;
    let r = eig.eigenvectors;
    let full = r * Matrix3::from_diagonal(&m.into()) * r.transpose();
    Ok((full + full.transpose()) * 0.5)
}

/// Moment matrix together with the two cell diffusion tensors (um²/h).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionTensors {
    pub moment: Matrix3<f64>,
    pub d1: Matrix3<f64>,
    pub d2: Matrix3<f64>,
}

/// `(λ10/λ2)(s2/s1)²`, evaluated as one quotient of products.
pub fn d2_over_d1(p: &ParameterSet) -> f64 {
    (p.lambda10 * p.s2 * p.s2) / (p.lambda2 * p.s1 * p.s1)
}

pub fn build_tensors(moment: &Matrix3<f64>, p: &ParameterSet) -> DiffusionTensors {
    let d1 = moment * (p.s1 * p.s1 / p.lambda10);
    let d2 = d1 * d2_over_d1(p);
    DiffusionTensors {
        moment: *moment,
        d1,
        d2,
    }
}

/// Leading 2x2 principal block, used for planar simulations.
pub fn restrict_2d(d: &Matrix3<f64>) -> Matrix2<f64> {
    d.fixed_view::<2, 2>(0, 0).into_owned()
}

pub fn table1_moment() -> Matrix3<f64> {
    Matrix3::from_fn(|r, c| TABLE1_MOMENT[r][c])
}

/// Angle (radians, in `(-π/2, π/2]`) of the eigenvector belonging to the
/// larger eigenvalue of a symmetric 2x2 matrix.
pub fn principal_angle(d: &Matrix2<f64>) -> f64 {
    let a = 0.5 * (2.0 * d[(0, 1)]).atan2(d[(0, 0)] - d[(1, 1)]);
    if a <= -std::f64::consts::FRAC_PI_2 {
        a + std::f64::consts::PI
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_moment_is_a_third() {
        let m = acg_moment_diag([1.0, 1.0, 1.0]).unwrap();
        for v in m {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_equal_axes_share_moments() {
        // axes 2 and 3 are interchangeable
        let m = acg_moment_diag([0.25, 1.0, 1.0]).unwrap();
        assert!((m[1] - m[2]).abs() < 1e-14);
        assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(m[0] > 1.0 / 3.0);
    }

    #[test]
    fn rejects_nonpositive_b() {
        assert!(acg_moment_diag([0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn orientation_matrix_validation() {
        assert!(
            OrientationMatrix::from_rows([[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
                .is_err()
        );
        assert!(OrientationMatrix::diagonal([1.0, -1.0, 1.0]).is_err());
        assert!(OrientationMatrix::diagonal([1.0, 2.0, 3.0]).is_ok());
    }

    #[test]
    fn diagonal_input_has_exact_zero_off_diagonals() {
        let a = OrientationMatrix::diagonal([4.0, 1.0, 0.5]).unwrap();
        let m = acg_moment(&a).unwrap();
        for (r, c) in [(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)] {
            assert_eq!(m[(r, c)], 0.0);
        }
    }

    #[test]
    fn table1_tensors() {
        let p = ParameterSet::table1();
        let t = build_tensors(&table1_moment(), &p);
        assert_eq!(d2_over_d1(&p), 1.0);
        assert_eq!(t.d1, t.d2);
        let r = restrict_2d(&t.d1);
        assert!((r[(0, 0)] - 0.204e6).abs() < 1e-6);
        assert!((r[(0, 1)] - 0.189e6).abs() < 1e-6);
        assert!((r[(1, 1)] - 0.447e6).abs() < 1e-6);
        assert_eq!(r[(0, 1)], r[(1, 0)]);
    }

    #[test]
    fn isotropic_tensor_scaling() {
        let p = ParameterSet::table1();
        let t = build_tensors(&(Matrix3::identity() / 3.0), &p);
        let expect = p.s1 * p.s1 / p.lambda10 / 3.0;
        assert!((t.d1[(0, 0)] - expect).abs() < 1e-9 * expect);
        assert_eq!(t.d1[(0, 1)], 0.0);
        assert_eq!(restrict_2d(&Matrix3::identity()), Matrix2::identity());
    }

    #[test]
    fn principal_angle_of_table1_block() {
        let r = restrict_2d(&table1_moment());
        let deg = principal_angle(&r).to_degrees();
        assert!((deg - 61.36).abs() < 0.05, "{deg}");
        assert!(
            (principal_angle(&Matrix2::new(1.0, 0.0, 0.0, 2.0)).to_degrees() - 90.0).abs() < 1e-12
        );
    }
}
