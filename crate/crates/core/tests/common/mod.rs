//! Independent oracles for the integration tests. Nothing here reuses the
//! library's stepping or quadrature code.

#![allow(dead_code)]

use nalgebra::{Matrix3, Rotation3, Vector3};
use rand::Rng;
use seedsim::model::{ode_rhs, OdeState, ParameterSet, StimulusSignal};

/// Classical fixed-step RK4 on the model right-hand side, returning states
/// at every multiple of `sample` (which must be a multiple of `dt`).
pub fn rk4_oracle(
    p: &ParameterSet,
    s: &StimulusSignal,
    y0: OdeState,
    t_end: f64,
    dt: f64,
    sample: f64,
) -> Vec<(f64, [f64; 5])> {
    let per_sample = (sample / dt).round() as usize;
    let n = (t_end / dt).round() as usize;
    let f = |t: f64, y: &[f64; 5]| {
        ode_rhs(t, &OdeState::from_array(*y), s, p)
            .unwrap()
            .to_array()
    };
    let axpy = |y: &[f64; 5], a: f64, k: &[f64; 5]| {
        let mut out = *y;
        for i in 0..5 {
            out[i] += a * k[i];
        }
        out
    };
    let mut y = y0.to_array();
    let mut out = vec![(0.0, y)];
    for step in 0..n {
        let t = step as f64 * dt;
        let k1 = f(t, &y);
        let k2 = f(t + 0.5 * dt, &axpy(&y, 0.5 * dt, &k1));
        let k3 = f(t + 0.5 * dt, &axpy(&y, 0.5 * dt, &k2));
        let k4 = f(t + dt, &axpy(&y, dt, &k3));
        for i in 0..5 {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (step + 1) % per_sample == 0 {
            out.push(((step + 1) as f64 * dt, y));
        }
    }
    out
}

/// Largest per-component error, each scaled by that component's largest
/// reference magnitude over the run.
pub fn max_scaled_error(
    reference: &[(f64, [f64; 5])],
    lookup: impl Fn(f64) -> [f64; 5],
) -> [f64; 5] {
    let mut scale = [0.0f64; 5];
    for (_, y) in reference {
        for i in 0..5 {
            scale[i] = scale[i].max(y[i].abs());
        }
    }
    let mut err = [0.0f64; 5];
    for (t, y) in reference {
        let z = lookup(*t);
        for i in 0..5 {
            err[i] = err[i].max((z[i] - y[i]).abs() / scale[i]);
        }
    }
    err
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Second moment `E[u u^T]` of the angular central Gaussian with parameter
/// `a`, by direct quadrature of its density
/// `(u^T A^-1 u)^(-3/2) / (4 pi sqrt(det A))` over the unit sphere:
/// Gauss-Legendre in `z = cos(theta)`, trapezoid in the azimuth.
pub fn sphere_moment_oracle(a: &Matrix3<f64>, nz: usize, nphi: usize) -> Matrix3<f64> {
    let ainv = a.try_inverse().unwrap();
    let norm = 1.0 / (4.0 * std::f64::consts::PI * a.determinant().sqrt());
    let dphi = 2.0 * std::f64::consts::PI / nphi as f64;
    let mut m = Matrix3::zeros();
    for (z, wz) in gauss_legendre(nz) {
        let r = (1.0 - z * z).sqrt();
        for k in 0..nphi {
            let phi = k as f64 * dphi;
            let u = Vector3::new(r * phi.cos(), r * phi.sin(), z);
            let f = norm * (u.dot(&(ainv * u))).powf(-1.5);
            m += u * u.transpose() * (f * wz * dphi);
        }
    }
    m
}

/// Random SPD matrix `R diag(l) R^T` with eigenvalues in [0.2, 5].
pub fn random_spd(rng: &mut impl Rng) -> Matrix3<f64> {
    let axis = Vector3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    let rot = Rotation3::new(axis.normalize() * rng.random_range(0.0..std::f64::consts::PI));
    let l = Matrix3::from_diagonal(&Vector3::new(
        rng.random_range(0.2..5.0),
        rng.random_range(0.2..5.0),
        rng.random_range(0.2..5.0),
    ));
    let a = rot.matrix() * l * rot.matrix().transpose();
    (a + a.transpose()) * 0.5
}
