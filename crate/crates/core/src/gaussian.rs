//! Discrete Maxwellians and anisotropic Gaussians, with Newton moment
//! matching so that their quadrature moments hit prescribed values.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{Distribution, VelocityGrid};
use crate::linalg::{solve_dense, SpdTensor};
use crate::vector::{self, Vec3};

/// Newton iterations allowed before giving up.
pub const MAX_NEWTON_ITERATIONS: usize = 50;
/// Scaled tolerance on the matched `(n, u, T)`.
pub const MATCH_TOL: f64 = 1e-12;

/// Density, mean velocity and temperature to reproduce on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetMoments {
    pub n: f64,
    pub u: Vec3,
    pub temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchReport {
    pub iterations: usize,
    /// Largest of the relative density error, velocity error in thermal
    /// units and relative temperature error.
    pub residual: f64,
}

/// `n / (2 pi T/m)^{d/2} exp(-|v - u|^2 / (2 T/m))` at every node.
pub fn maxwellian_on_grid(n: f64, u: Vec3, temperature: f64, m: f64, grid: &VelocityGrid) -> Result<Distribution> {
    check_density(n)?;
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::out_of_range("temperature", temperature, "> 0"));
    }
    if !(m > 0.0) {
        return Err(Error::out_of_range("mass", m, "> 0"));
    }
    Ok(Distribution::from_values(maxwellian_values(n, u, temperature, m, grid)))
}

fn maxwellian_values(n: f64, u: Vec3, temperature: f64, m: f64, grid: &VelocityGrid) -> Vec<f64> {
    let theta = temperature / m;
    let u = truncate(u, grid.dim());
    let norm = n / (2.0 * PI * theta).powf(grid.dim() as f64 / 2.0);
    grid.tabulate(|v| norm * (-vector::norm2(vector::sub(*v, u)) / (2.0 * theta)).exp())
}

/// Zeroes the components of `u` past `dim`.
pub(crate) fn truncate(mut u: Vec3, dim: usize) -> Vec3 {
    for x in u.iter_mut().skip(dim) {
        *x = 0.0;
    }
    u
}

/// `n / sqrt(det(2 pi T/m)) exp(-1/2 (v - u) . (T/m)^{-1} (v - u))`, evaluated
/// through the Cholesky factor of `T`.
pub fn gaussian_on_grid(n: f64, u: Vec3, tensor: &SpdTensor, m: f64, grid: &VelocityGrid) -> Result<Distribution> {
    check_density(n)?;
    if tensor.dim() != grid.dim() {
        return Err(Error::InvalidGrid(format!(
            "tensor dimension {} does not match grid dimension {}",
            tensor.dim(),
            grid.dim()
        )));
    }
    if !(m > 0.0) {
        return Err(Error::out_of_range("mass", m, "> 0"));
    }
    Ok(Distribution::from_values(gaussian_values(n, u, tensor, 1.0, m, grid)))
}

/// Gaussian with covariance `scale * tensor / m`.
fn gaussian_values(n: f64, u: Vec3, tensor: &SpdTensor, scale: f64, m: f64, grid: &VelocityGrid) -> Vec<f64> {
    let d = grid.dim() as f64;
    let ln_norm = n.ln() - 0.5 * d * (2.0 * PI * scale / m).ln() - 0.5 * tensor.ln_det();
    let norm = ln_norm.exp();
    let c = m / (2.0 * scale);
    grid.tabulate(|v| norm * (-c * tensor.inv_quad(vector::sub(*v, u))).exp())
}

fn check_density(n: f64) -> Result<()> {
    if !(n >= 0.0 && n.is_finite()) {
        return Err(Error::out_of_range("density", n, ">= 0"));
    }
    Ok(())
}

/// Discrete Maxwellian whose quadrature `(n, u, T)` equal `target`.
pub fn match_moments(target: &TargetMoments, m: f64, grid: &VelocityGrid) -> Result<Distribution> {
    match_moments_report(target, m, grid).map(|(f, _)| f)
}

pub fn match_moments_report(
    target: &TargetMoments,
    m: f64,
    grid: &VelocityGrid,
) -> Result<(Distribution, MatchReport)> {
    maxwellian_on_grid(target.n, target.u, target.temperature, m, grid)?;
    newton_match(target, None, m, grid)
}

/// Gaussian with the shape of `shape` (rescaled by a scalar), matched so its
/// quadrature density, velocity and temperature are `n`, `u` and
/// `tr(shape)/d`.
pub fn match_gaussian(
    n: f64,
    u: Vec3,
    shape: &SpdTensor,
    m: f64,
    grid: &VelocityGrid,
) -> Result<(Distribution, MatchReport)> {
    gaussian_on_grid(n, u, shape, m, grid)?;
    let target = TargetMoments { n, u, temperature: shape.tensor().trace() / grid.dim() as f64 };
    newton_match(&target, Some(shape), m, grid)
}

/// Newton iteration on `(rho, U, s)` for the raw moments `(1, v, |v|^2)`.
///
/// Without a shape the model is the Maxwellian with temperature `s`; with a
/// shape it is the Gaussian with tensor `s * shape`, starting from `s = 1`.
fn newton_match(
    target: &TargetMoments,
    shape: Option<&SpdTensor>,
    m: f64,
    grid: &VelocityGrid,
) -> Result<(Distribution, MatchReport)> {
    if target.n == 0.0 {
        return Ok((Distribution::zeros(grid), MatchReport { iterations: 0, residual: 0.0 }));
    }
    let dim = grid.dim();
    let target = &TargetMoments { u: truncate(target.u, dim), ..*target };
    let df = dim as f64;
    let np = dim + 2;
    let thermal = (target.temperature / m).sqrt();
    let want = {
        let mut w = vec![target.n];
        w.extend_from_slice(&vector::scale(target.n, target.u)[..dim]);
        w.push(target.n * (vector::norm2(target.u) + df * target.temperature / m));
        w
    };

    let mut rho = target.n;
    let mut mean = target.u;
    let mut s = shape.map_or(target.temperature, |_| 1.0);
    let mut residual = f64::INFINITY;

    for iter in 0..=MAX_NEWTON_ITERATIONS {
        let values = match shape {
            None => maxwellian_values(rho, mean, s, m, grid),
            Some(t) => gaussian_values(rho, mean, t, s, m, grid),
        };
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NoConvergence { iterations: iter, residual });
        }

        // raw moments (5) followed by the 5x5 Jacobian, row-major over
        // (phi = 1, v0, v1, v2, |v|^2) x (d/d U0, U1, U2, d/ds)
        let sums: [f64; 25] = grid.integrate(|i, v| {
            let f = values[i];
            let x = vector::sub(*v, mean);
            let (z, q) = match shape {
                None => (x, vector::norm2(x)),
                Some(t) => (t.solve(x), t.inv_quad(x)),
            };
            let du = [f * m * z[0] / s, f * m * z[1] / s, f * m * z[2] / s];
            let ds = f * (m * q / (2.0 * s * s) - df / (2.0 * s));
            let v2 = vector::norm2(*v);
            let phi = [1.0, v[0], v[1], v[2], v2];
            let mut out = [0.0; 25];
            for (a, p) in phi.iter().enumerate() {
                out[a] = p * f;
                out[5 + 4 * a] = p * du[0];
                out[5 + 4 * a + 1] = p * du[1];
                out[5 + 4 * a + 2] = p * du[2];
                out[5 + 4 * a + 3] = p * ds;
            }
            out
        });

        // active rows/columns of the reduced system
        let rows: Vec<usize> = std::iter::once(0).chain(1..=dim).chain(std::iter::once(4)).collect();
        let raw: Vec<f64> = rows.iter().map(|&a| sums[a]).collect();

        let n_got = raw[0];
        let u_got: Vec<f64> = raw[1..=dim].iter().map(|j| j / n_got).collect();
        let u2: f64 = u_got.iter().map(|x| x * x).sum();
        let t_got = m * (raw[dim + 1] / n_got - u2) / df;
        let du_err = (0..dim).map(|k| (u_got[k] - target.u[k]).abs()).fold(0.0, f64::max);
        residual = ((n_got - target.n).abs() / target.n)
            .max(du_err / thermal)
            .max((t_got - target.temperature).abs() / target.temperature);
        if !residual.is_finite() {
            return Err(Error::NoConvergence { iterations: iter, residual });
        }
        if residual <= MATCH_TOL {
            return Ok((Distribution::from_values(values), MatchReport { iterations: iter, residual }));
        }
        if iter == MAX_NEWTON_ITERATIONS {
            break;
        }

        let jac: Vec<Vec<f64>> = rows
            .iter()
            .map(|&a| {
                let mut row = Vec::with_capacity(np);
                row.push(sums[a] / rho);
                for k in 0..dim {
                    row.push(sums[5 + 4 * a + k]);
                }
                row.push(sums[5 + 4 * a + 3]);
                row
            })
            .collect();
        let rhs: Vec<f64> = want.iter().zip(&raw).map(|(w, r)| w - r).collect();
        let Some(step) = solve_dense(jac, rhs) else {
            return Err(Error::NoConvergence { iterations: iter, residual });
        };

        let mut lambda = 1.0;
        while rho + lambda * step[0] <= 0.0 || s + lambda * step[np - 1] <= 0.0 {
            lambda *= 0.5;
            if lambda < 1e-12 {
                return Err(Error::NoConvergence { iterations: iter, residual });
            }
        }
        rho += lambda * step[0];
        for k in 0..dim {
            mean[k] += lambda * step[1 + k];
        }
        s += lambda * step[np - 1];
    }
    Err(Error::NoConvergence { iterations: MAX_NEWTON_ITERATIONS, residual })
}
