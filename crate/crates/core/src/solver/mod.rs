//! Time integration of the two-species relaxation system.
//!
//! The relaxation operator of species `k` is
//! `nu_kk n_k (S_k - f_k) + nu_kj n_j (C_k - f_k)` with self target `S_k` and
//! cross target `C_k`, both functions of the current moments.

mod scenario;
mod transport;

pub use scenario::{run_scenario, Diagnostics, KineticState, Record, Scenario, SpaceSpec, SpeciesInit, Splitting};
pub use transport::{cfl_number, transport_step};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Distribution, VelocityGrid};
use crate::params::{Frequencies, ParamBundle};
use crate::targets::{build_targets, MixtureState, TargetSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Integrator {
    /// Classical four-stage Runge-Kutta with targets rebuilt at every stage.
    Rk4,
    /// Frozen-target exponential step, positivity preserving for any `dt`.
    #[default]
    Exp,
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Integrator::Rk4 => "rk4",
            Integrator::Exp => "exp",
        })
    }
}

impl FromStr for Integrator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rk4" => Ok(Integrator::Rk4),
            "exp" => Ok(Integrator::Exp),
            other => Err(format!("unknown integrator `{other}`")),
        }
    }
}

/// Parameters, derived frequencies and the moment-matching switch.
#[derive(Debug, Clone)]
pub struct RelaxationModel {
    params: ParamBundle,
    freq: Frequencies,
    matching: bool,
}

/// Targets of one state together with their collision weights.
#[derive(Debug, Clone)]
pub struct Relaxation {
    pub state: MixtureState,
    pub targets: TargetSet,
    /// `[nu_kk n_k, nu_kj n_j]` for each species; zero where a target is absent.
    pub weights: [[f64; 2]; 2],
}

impl Relaxation {
    /// `nu_kk n_k + nu_kj n_j`
    pub fn total_rate(&self, k: usize) -> f64 {
        self.weights[k][0] + self.weights[k][1]
    }

    /// Weighted mean of the two targets of species `k`, or `None` for an empty species.
    pub fn combined_target(&self, k: usize) -> Option<Distribution> {
        let total = self.total_rate(k);
        if total == 0.0 {
            return None;
        }
        let s = self.targets.self_targets[k].as_ref()?;
        let mut g = s.scaled(self.weights[k][0] / total);
        if let Some(c) = &self.targets.cross_targets[k] {
            g.axpy(self.weights[k][1] / total, c);
        }
        Some(g)
    }
}

impl RelaxationModel {
    pub fn new(params: ParamBundle, matching: bool) -> Result<Self> {
        let freq = params.frequencies()?;
        Ok(Self { params, freq, matching })
    }

    pub fn params(&self) -> &ParamBundle {
        &self.params
    }

    pub fn frequencies(&self) -> &Frequencies {
        &self.freq
    }

    pub fn matching(&self) -> bool {
        self.matching
    }

    pub fn relaxation(&self, f: [&Distribution; 2], grid: &VelocityGrid) -> Result<Relaxation> {
        let state = MixtureState::from_distributions(f, self.params.masses(), grid)?;
        let targets = build_targets(&state, &self.params, grid, self.matching)?;
        let mut weights = [[0.0; 2]; 2];
        for (k, w) in weights.iter_mut().enumerate() {
            let j = 1 - k;
            if targets.self_targets[k].is_some() {
                w[0] = self.freq.self_freq(k) * state.density(k);
            }
            if targets.cross_targets[k].is_some() {
                w[1] = self.freq.cross_freq(k) * state.density(j);
            }
        }
        Ok(Relaxation { state, targets, weights })
    }

    /// Time derivative of both species.
    pub fn rhs(&self, f: [&Distribution; 2], grid: &VelocityGrid) -> Result<[Distribution; 2]> {
        let r = self.relaxation(f, grid)?;
        let mut out = [Distribution::zeros(grid), Distribution::zeros(grid)];
        for (k, df) in out.iter_mut().enumerate() {
            if let Some(g) = r.combined_target(k) {
                let total = r.total_rate(k);
                let (gv, fv) = (g.values(), f[k].values());
                df.values_mut().par_iter_mut().enumerate().for_each(|(i, x)| *x = total * (gv[i] - fv[i]));
            }
        }
        Ok(out)
    }
}

/// Advances both species by `dt` under the relaxation operator alone.
///
/// The exponential step relaxes both species with the common rate
/// `L = max_k nu_tot,k`: `f_k <- f_k + (1 - exp(-L dt))/L * nu_tot,k (g*_k - f_k)`.
/// The shared factor keeps the exchange terms of the two species in balance,
/// so momentum and energy are conserved exactly, and every update is a convex
/// combination of `f_k` and `g*_k`. The faster species follows
/// `g*_k + (f_k - g*_k) exp(-nu_tot,k dt)`.
pub fn relax_step(
    model: &RelaxationModel,
    f: &mut [Distribution; 2],
    dt: f64,
    integrator: Integrator,
    grid: &VelocityGrid,
) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::out_of_range("dt", dt, "> 0"));
    }
    match integrator {
        Integrator::Exp => exp_step(model, f, dt, grid),
        Integrator::Rk4 => rk4_step(model, f, dt, grid),
    }
}

fn exp_step(model: &RelaxationModel, f: &mut [Distribution; 2], dt: f64, grid: &VelocityGrid) -> Result<()> {
    let r = model.relaxation([&f[0], &f[1]], grid)?;
    let rate = r.total_rate(0).max(r.total_rate(1));
    if rate == 0.0 {
        return Ok(());
    }
    let phi = -(-rate * dt).exp_m1() / rate;
    for (k, fk) in f.iter_mut().enumerate() {
        let Some(g) = r.combined_target(k) else { continue };
        let theta = (phi * r.total_rate(k)).min(1.0);
        let gv = g.values();
        fk.values_mut().par_iter_mut().enumerate().for_each(|(i, x)| *x = (1.0 - theta) * *x + theta * gv[i]);
    }
    Ok(())
}

fn rk4_step(model: &RelaxationModel, f: &mut [Distribution; 2], dt: f64, grid: &VelocityGrid) -> Result<()> {
    let stage = |base: &[Distribution; 2], k: &[Distribution; 2], h: f64| -> [Distribution; 2] {
        let mut s = base.clone();
        s[0].axpy(h, &k[0]);
        s[1].axpy(h, &k[1]);
        s
    };
    let k1 = model.rhs([&f[0], &f[1]], grid)?;
    let s2 = stage(f, &k1, 0.5 * dt);
    let k2 = model.rhs([&s2[0], &s2[1]], grid)?;
    let s3 = stage(f, &k2, 0.5 * dt);
    let k3 = model.rhs([&s3[0], &s3[1]], grid)?;
    let s4 = stage(f, &k3, dt);
    let k4 = model.rhs([&s4[0], &s4[1]], grid)?;
    for s in 0..2 {
        let (a, b, c, d) = (k1[s].values(), k2[s].values(), k3[s].values(), k4[s].values());
        f[s].values_mut()
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, x)| *x += dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{match_moments, TargetMoments};
    use crate::moments::moments;
    use crate::params::{EsParams, InteractionSpec, MixingParams, SpeciesSpec, Variant};

    fn params(m2: f64, eps: f64, variant: Variant) -> ParamBundle {
        ParamBundle {
            species: [SpeciesSpec::new("a", 1.0).unwrap(), SpeciesSpec::new("b", m2).unwrap()],
            interaction: InteractionSpec::new(1.0, eps, 1.0, 1.0).unwrap(),
            mixing: MixingParams { delta: 0.5, alpha: 0.4, gamma: 0.0 },
            es: EsParams { variant, mu1: -0.3, mu2: 0.4, mu12: 0.1, mu21: 0.2 },
        }
    }

    fn maxwellian(n: f64, u: [f64; 3], t: f64, m: f64, g: &VelocityGrid) -> Distribution {
        match_moments(&TargetMoments { n, u, temperature: t }, m, g).unwrap()
    }

    fn grid() -> VelocityGrid {
        VelocityGrid::uniform(3, 24, -8.0, 8.0).unwrap()
    }

    #[test]
    fn integrator_names() {
        assert_eq!("RK4".parse::<Integrator>().unwrap(), Integrator::Rk4);
        assert_eq!(Integrator::Exp.to_string(), "exp");
        assert!("euler".parse::<Integrator>().is_err());
    }

    #[test]
    fn equilibrium_is_fixed_point() {
        let g = grid();
        let u = [0.1, -0.2, 0.0];
        let f0 = [maxwellian(1.0, u, 0.9, 1.0, &g), maxwellian(0.6, u, 0.9, 1.5, &g)];
        for variant in Variant::ALL {
            let model = RelaxationModel::new(params(1.5, 0.7, variant), true).unwrap();
            for integ in [Integrator::Exp, Integrator::Rk4] {
                let mut f = f0.clone();
                relax_step(&model, &mut f, 0.1, integ, &g).unwrap();
                for k in 0..2 {
                    assert!(f[k].max_abs_diff(&f0[k]) < 1e-12, "{variant} {integ}");
                }
            }
        }
    }

    #[test]
    fn exp_large_step_reaches_combined_target() {
        let g = grid();
        // equal total rates: m1 = m2, eps = 1, n1 = n2
        let f0 = [maxwellian(1.0, [0.3, 0.0, 0.0], 1.2, 1.0, &g), maxwellian(1.0, [-0.2, 0.1, 0.0], 0.8, 1.0, &g)];
        let model = RelaxationModel::new(params(1.0, 1.0, Variant::Bgk), true).unwrap();
        let r = model.relaxation([&f0[0], &f0[1]], &g).unwrap();
        assert_eq!(r.total_rate(0), r.total_rate(1));
        let dt = 50.0 / r.total_rate(0);
        let mut f = f0.clone();
        relax_step(&model, &mut f, dt, Integrator::Exp, &g).unwrap();
        for k in 0..2 {
            assert!(f[k].max_abs_diff(&r.combined_target(k).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn exp_conserves_and_stays_positive() {
        let g = grid();
        let f0 = [maxwellian(1.3, [0.4, 0.0, -0.1], 1.2, 1.0, &g), maxwellian(0.5, [-0.3, 0.2, 0.0], 0.6, 2.0, &g)];
        for variant in Variant::ALL {
            let model = RelaxationModel::new(params(2.0, 0.6, variant), true).unwrap();
            let totals = |f: &[Distribution; 2]| {
                let a = moments(&f[0], 1.0, &g).unwrap();
                let b = moments(&f[1], 2.0, &g).unwrap();
                let p = crate::vector::add(a.momentum(1.0), b.momentum(2.0));
                (a.n, b.n, p, a.energy(1.0) + b.energy(2.0))
            };
            let before = totals(&f0);
            let mut f = f0.clone();
            for dt in [0.05, 3.0, 1e3] {
                relax_step(&model, &mut f, dt, Integrator::Exp, &g).unwrap();
                assert!(f[0].is_nonnegative() && f[1].is_nonnegative());
            }
            let after = totals(&f);
            assert!((after.0 - before.0).abs() < 1e-12);
            assert!((after.1 - before.1).abs() < 1e-12);
            for i in 0..3 {
                assert!((after.2[i] - before.2[i]).abs() < 1e-12, "{variant}");
            }
            assert!((after.3 - before.3).abs() < 1e-11 * before.3, "{variant}");
        }
    }

    #[test]
    fn rk4_conserves() {
        let g = grid();
        let mut f = [maxwellian(1.0, [0.4, 0.0, 0.0], 1.0, 1.0, &g), maxwellian(0.7, [-0.3, 0.0, 0.0], 0.7, 1.0, &g)];
        let model = RelaxationModel::new(params(1.0, 1.0, Variant::EsFullB), true).unwrap();
        let n0 = [f[0].density(&g), f[1].density(&g)];
        relax_step(&model, &mut f, 0.1, Integrator::Rk4, &g).unwrap();
        assert!((f[0].density(&g) - n0[0]).abs() < 1e-12);
        assert!((f[1].density(&g) - n0[1]).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_dt() {
        let g = grid();
        let model = RelaxationModel::new(params(1.0, 1.0, Variant::Bgk), true).unwrap();
        let mut f = [maxwellian(1.0, [0.0; 3], 1.0, 1.0, &g), Distribution::zeros(&g)];
        assert!(relax_step(&model, &mut f, 0.0, Integrator::Exp, &g).is_err());
    }
}
