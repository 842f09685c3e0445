//! Macroscopic moments and the entropy functional by midpoint quadrature.

use crate::error::{Error, Result};
use crate::grid::{Distribution, VelocityGrid};
use crate::linalg::SymTensor;
use crate::vector::{self, Vec3};

/// Densities below this are treated as an empty cell.
pub const N_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub n: f64,
    pub u: Vec3,
    pub temperature: f64,
    /// `m sum w (v - u)(v - u)^T f`
    pub pressure: SymTensor,
    /// Raw energy flux `1/2 sum w |v|^2 v f` (mass-free).
    pub energy_flux: Vec3,
    /// Peculiar heat flux `m sum w (v - u)|v - u|^2 f`.
    pub heat_flux: Vec3,
}

impl MomentSet {
    pub fn dim(&self) -> usize {
        self.pressure.dim()
    }

    /// `P / n`, the pressure tensor per particle.
    pub fn pressure_per_particle(&self) -> SymTensor {
        self.pressure.scale(1.0 / self.n)
    }

    /// `||P - n T I||_F`
    pub fn anisotropy(&self) -> f64 {
        self.pressure.add_scalar(-self.n * self.temperature).frobenius()
    }

    /// `m n u`
    pub fn momentum(&self, mass: f64) -> Vec3 {
        vector::scale(mass * self.n, self.u)
    }

    /// `1/2 m n |u|^2 + d/2 n T`
    pub fn energy(&self, mass: f64) -> f64 {
        0.5 * mass * self.n * vector::norm2(self.u) + 0.5 * self.dim() as f64 * self.n * self.temperature
    }
}

/// Moments of `f` for particle mass `m`, with the default density floor.
pub fn moments(f: &Distribution, m: f64, grid: &VelocityGrid) -> Result<MomentSet> {
    moments_with_floor(f, m, grid, N_FLOOR)
}

pub fn moments_with_floor(f: &Distribution, m: f64, grid: &VelocityGrid, n_floor: f64) -> Result<MomentSet> {
    if f.len() != grid.len() {
        return Err(Error::ShapeMismatch { expected: grid.len(), got: f.len() });
    }
    let vals = f.values();
    let [n, j0, j1, j2] = grid.integrate(|i, v| {
        let x = vals[i];
        [x, x * v[0], x * v[1], x * v[2]]
    });
    if !(n >= n_floor) {
        return Err(Error::DegenerateDensity { n, floor: n_floor });
    }
    let u = [j0 / n, j1 / n, j2 / n];

    // central moments: P (6), Q (3), Qtilde (3)
    let s = grid.integrate(|i, v| {
        let x = vals[i];
        let c = vector::sub(*v, u);
        let c2 = vector::norm2(c);
        let v2 = vector::norm2(*v);
        [
            x * c[0] * c[0],
            x * c[0] * c[1],
            x * c[0] * c[2],
            x * c[1] * c[1],
            x * c[1] * c[2],
            x * c[2] * c[2],
            x * v2 * v[0],
            x * v2 * v[1],
            x * v2 * v[2],
            x * c2 * c[0],
            x * c2 * c[1],
            x * c2 * c[2],
        ]
    });
    let dim = grid.dim();
    let mut pressure = SymTensor::zeros(dim);
    let idx = [(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 1, 3), (1, 2, 4), (2, 2, 5)];
    for (a, b, k) in idx {
        if a < dim && b < dim {
            pressure.set_sym(a, b, m * s[k]);
        }
    }
    let temperature = pressure.trace() / (dim as f64 * n);
    Ok(MomentSet {
        n,
        u,
        temperature,
        pressure,
        energy_flux: [0.5 * s[6], 0.5 * s[7], 0.5 * s[8]],
        heat_flux: [m * s[9], m * s[10], m * s[11]],
    })
}

/// `sum_k sum_i w f_k ln f_k` with `0 ln 0 = 0`. Negative values (possible in
/// intermediate RK4 states) are clamped to zero here and nowhere else.
pub fn h_functional(dists: &[&Distribution], grid: &VelocityGrid) -> f64 {
    dists.iter().map(|f| h_single(f, grid)).sum()
}

pub fn h_single(f: &Distribution, grid: &VelocityGrid) -> f64 {
    let vals = f.values();
    let [h] = grid.integrate(|i, _| {
        let x = vals[i];
        [if x > 0.0 { x * x.ln() } else { 0.0 }]
    });
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::maxwellian_on_grid;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn reference_maxwellian_moments() {
        let g = VelocityGrid::reference(3);
        let f = maxwellian_on_grid(1.0, [0.0; 3], 1.0, 1.0, &g).unwrap();
        let mo = moments(&f, 1.0, &g).unwrap();
        assert!((mo.n - 1.0).abs() < 1e-8);
        assert!(vector::norm(mo.u) < 1e-10);
        assert!((mo.temperature - 1.0).abs() < 1e-6);
        assert!(mo.anisotropy() < 1e-10);
        assert!(vector::norm(mo.heat_flux) < 1e-10);
    }

    #[test]
    fn shifted_maxwellian_velocity() {
        let g = VelocityGrid::reference(3);
        let f = maxwellian_on_grid(1.0, [1.0, 0.0, 0.0], 1.0, 1.0, &g).unwrap();
        let mo = moments(&f, 1.0, &g).unwrap();
        assert!((mo.u[0] - 1.0).abs() < 1e-8);
        assert!(mo.u[1].abs() < 1e-12 && mo.u[2].abs() < 1e-12);
    }

    #[test]
    fn zero_distribution_is_degenerate() {
        let g = VelocityGrid::uniform(3, 8, -2.0, 2.0).unwrap();
        assert!(matches!(moments(&Distribution::zeros(&g), 1.0, &g), Err(Error::DegenerateDensity { .. })));
    }

    #[test]
    fn trace_identity() {
        let g = VelocityGrid::uniform(2, 16, -3.0, 3.0).unwrap();
        let f =
            Distribution::from_values(g.tabulate(|v| (1.0 + v[0] * v[0] + 0.3 * v[1]).abs() * (-v[1].powi(2)).exp()));
        let mo = moments(&f, 2.5, &g).unwrap();
        assert_relative_eq!(mo.pressure.trace(), 2.0 * mo.n * mo.temperature, max_relative = 1e-14);
    }

    #[test]
    fn entropy_of_maxwellian() {
        for dim in 1..=3 {
            let g = VelocityGrid::reference(dim);
            let (n, t, m) = (1.7, 0.9, 1.3);
            let f = maxwellian_on_grid(n, [0.2, -0.1, 0.0], t, m, &g).unwrap();
            let d = dim as f64;
            let exact = n * ((n / (2.0 * PI * t / m).powf(d / 2.0)).ln() - d / 2.0);
            assert!((h_single(&f, &g) - exact).abs() < 1e-8, "dim {dim}");
            let h2 = h_functional(&[&f, &f], &g);
            assert_eq!(h2, 2.0 * h_single(&f, &g));
        }
    }

    #[test]
    fn zero_nodes_contribute_nothing() {
        let g = VelocityGrid::uniform(1, 8, -1.0, 1.0).unwrap();
        let f = Distribution::from_values(vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        assert_eq!(h_single(&f, &g), 0.0);
        let f = Distribution::from_values(vec![0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_relative_eq!(h_single(&f, &g), 0.25 * 2.0 * 2f64.ln(), epsilon = 1e-15);
    }
}
