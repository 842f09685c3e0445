//! Chapman-Enskog quantities of the two-species model, linear relaxation
//! rates, and decay-rate extraction from simulated time series.

use crate::error::{Error, Result};
use crate::grid::VelocityGrid;
use crate::params::{dimensionless_scales, DimensionlessScales, ParamBundle, ScaleInputs};
use crate::vector::{self, Vec3};

/// `(m1/m2) eps (beta1 n1/n2 + 1) / (beta2 n2/n1 + 1)`
pub fn constant_a(m1: f64, m2: f64, epsilon: f64, beta1: f64, beta2: f64, n1: f64, n2: f64) -> f64 {
    m1 / m2 * epsilon * (beta1 * n1 / n2 + 1.0) / (beta2 * n2 / n1 + 1.0)
}

/// Velocity and temperature mixing coefficients `(c1, c2)`.
#[allow(clippy::too_many_arguments)]
pub fn mixing_coefficients(
    a: f64,
    n1: f64,
    n2: f64,
    m1: f64,
    m2: f64,
    beta1: f64,
    delta: f64,
    alpha: f64,
) -> (f64, f64) {
    let r = m1 / m2;
    let c1 = (-a * n1 * (1.0 - delta) + n2 * (beta1 + delta)) / ((beta1 + 1.0) * (a * n1 + n2));
    let c2 = (-a * n1 * (1.0 - alpha) + r * n2 * (beta1 + alpha)) / ((beta1 + 1.0) * (a * n1 + r * n2));
    (c1, c2)
}

/// Macroscopic state of one species as seen by the closed-form expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeciesMacro {
    pub n: f64,
    pub u: Vec3,
    pub temperature: f64,
    pub mass: f64,
}

/// Moments of the combination `A f1 + f2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZerothMoments {
    pub n_bar: f64,
    pub u_bar: Vec3,
    /// `1/(d n_bar) * integral |v - u_bar|^2 (A f1 + f2) dv`
    pub t_over_m: f64,
}

/// Closed forms for Maxwellian `f1`, `f2` in `dim` velocity dimensions.
pub fn zeroth_moments(a: f64, s: &[SpeciesMacro; 2], dim: usize) -> ZerothMoments {
    let [s1, s2] = s;
    let w1 = a * s1.n;
    let n_bar = w1 + s2.n;
    let u_bar = vector::scale(1.0 / n_bar, vector::add(vector::scale(w1, s1.u), vector::scale(s2.n, s2.u)));
    let du2 = vector::norm2(vector::sub(s1.u, s2.u));
    let t_over_m = w1 * s2.n / (n_bar * n_bar) * du2 / dim as f64
        + (w1 * s1.temperature / s1.mass + s2.n * s2.temperature / s2.mass) / n_bar;
    ZerothMoments { n_bar, u_bar, t_over_m }
}

/// Common velocity and temperature of the zeroth-order equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumValues {
    pub u_bar: Vec3,
    pub t_bar: f64,
}

/// `u_bar` and `T_bar = n_bar m1 (T/m)_bar / (A n1 + n2 m1/m2)`.
///
/// Coincides with the state conserving `m1 n1 u1 + m2 n2 u2` and the total
/// energy exactly when `A = m1/m2`.
pub fn common_equilibrium(a: f64, s: &[SpeciesMacro; 2], dim: usize) -> EquilibriumValues {
    let z = zeroth_moments(a, s, dim);
    let [s1, s2] = s;
    let t_bar = z.n_bar * s1.mass * z.t_over_m / (a * s1.n + s2.n * s1.mass / s2.mass);
    EquilibriumValues { u_bar: z.u_bar, t_bar }
}

/// Equilibrium fixed by conservation of particle numbers, total momentum and
/// total energy.
pub fn conserved_equilibrium(s: &[SpeciesMacro; 2], dim: usize) -> EquilibriumValues {
    let rho: f64 = s.iter().map(|x| x.mass * x.n).sum();
    let mom = s.iter().fold(vector::ZERO, |acc, x| vector::add(acc, vector::scale(x.mass * x.n, x.u)));
    let u_bar = vector::scale(1.0 / rho, mom);
    let d = dim as f64;
    let energy: f64 = s.iter().map(|x| 0.5 * x.mass * x.n * vector::norm2(x.u) + 0.5 * d * x.n * x.temperature).sum();
    let n_tot: f64 = s.iter().map(|x| x.n).sum();
    let t_bar = (energy - 0.5 * rho * vector::norm2(u_bar)) / (0.5 * d * n_tot);
    EquilibriumValues { u_bar, t_bar }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeConstants {
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
    pub scales: DimensionlessScales,
}

/// `A`, `c1`, `c2` and the scales for a parameter bundle at densities `n1`, `n2`.
pub fn ce_constants(params: &ParamBundle, n1: f64, n2: f64, inputs: ScaleInputs) -> Result<CeConstants> {
    let [m1, m2] = params.masses();
    let it = &params.interaction;
    let scales = dimensionless_scales(inputs, it.beta1, it.beta2, it.epsilon, n1, n2)?;
    let a = constant_a(m1, m2, it.epsilon, it.beta1, it.beta2, n1, n2);
    let (c1, c2) = mixing_coefficients(a, n1, n2, m1, m2, it.beta1, params.mixing.delta, params.mixing.alpha);
    Ok(CeConstants { a, c1, c2, scales })
}

/// First-order corrections `u_k = u_bar + sum_j K_u[k][j] I_j` and
/// `T_k = T_bar + sum_j K_T[k][j] J_j`, where `I_j` is the velocity moment and
/// `J_j` the `|v - u_bar|^2` moment of the transport operator applied to the
/// Maxwellian of species `j` (three velocity dimensions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionPrefactors {
    pub k_u: [[f64; 2]; 2],
    pub k_t: [[f64; 2]; 2],
}

/// Denominators closer to zero than this are treated as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

pub fn expansion_prefactors(c: &CeConstants, n1: f64, n2: f64, m1: f64, m2: f64) -> Result<ExpansionPrefactors> {
    let singular =
        |what, value: f64| Error::SingularPrefactor { what, value, a: c.a, c1: c.c1, c2: c.c2, n1, n2, m1, m2 };
    let s1 = c.scales.weight(0);
    let s2 = c.scales.weight(1);

    let p = c.a * n1 / n2;
    let du = 1.0 - p * c.c1 - c.c1;
    if !(du.abs() > SINGULAR_TOL) {
        return Err(singular("1 - A (n1/n2) c1 - c1", du));
    }
    let k_u = [
        [-(1.0 - p * c.c1) / du * s1 / n1, c.c1 / du * s2 / n2],
        [p * c.c1 / du * s1 / n1, -(1.0 - c.c1) / du * s2 / n2],
    ];

    let q = p * m2 / m1;
    let dt = 1.0 - q * c.c2 - c.c2;
    if !(dt.abs() > SINGULAR_TOL) {
        return Err(singular("1 - A (n1/n2) (m2/m1) c2 - c2", dt));
    }
    let j1 = s1 / (3.0 * n1);
    let j2 = s2 * m2 / m1 / (3.0 * n2);
    let k_t = [[-(1.0 - q * c.c2) / dt * j1, c.c2 / dt * j2], [q * c.c2 / dt * j1, -(1.0 - c.c2) / dt * j2]];
    Ok(ExpansionPrefactors { k_u, k_t })
}

/// `nu12 (1 - delta)(n2 + (m1/m2) n1)`, the decay rate of `u1 - u2` for `gamma = 0`.
pub fn rate_velocity(nu12: f64, delta: f64, n1: f64, n2: f64, m1: f64, m2: f64) -> f64 {
    nu12 * (1.0 - delta) * (n2 + m1 / m2 * n1)
}

/// `nu12 (1 - alpha)(n1 + n2)`, the decay rate of `T1 - T2` for `u1 = u2`.
pub fn rate_temperature(nu12: f64, alpha: f64, n1: f64, n2: f64) -> f64 {
    nu12 * (1.0 - alpha) * (n1 + n2)
}

/// `nu n (1 - mu)`, the decay rate of the traceless pressure of a single
/// species under its ellipsoidal self target.
pub fn rate_shear(nu: f64, n: f64, mu: f64) -> f64 {
    nu * n * (1.0 - mu)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticRates {
    pub lambda_u: f64,
    pub lambda_t: f64,
    /// Self-collision shear rate of each species, `nu_kk n_k (1 - mu_k)`.
    pub lambda_shear: [f64; 2],
}

pub fn analytic_rates(params: &ParamBundle, n1: f64, n2: f64) -> Result<AnalyticRates> {
    let [m1, m2] = params.masses();
    let fr = params.frequencies()?;
    let mix = &params.mixing;
    let mu = |k: usize| {
        if params.es.variant.has_es_self() {
            params.es.self_mu(k)
        } else {
            0.0
        }
    };
    Ok(AnalyticRates {
        lambda_u: rate_velocity(fr.nu12, mix.delta, n1, n2, m1, m2),
        lambda_t: rate_temperature(fr.nu12, mix.alpha, n1, n2),
        lambda_shear: [rate_shear(fr.nu11, n1, mu(0)), rate_shear(fr.nu22, n2, mu(1))],
    })
}

/// Relative amplitude window of [`fit_decay_rate`].
pub const FIT_WINDOW: (f64, f64) = (1e-6, 1e-1);
/// Fewest samples accepted in the window.
pub const FIT_MIN_SAMPLES: usize = 10;

/// Minus the least-squares slope of `ln(amplitude)` against `t`, over the
/// samples whose amplitude lies in [`FIT_WINDOW`] times the first amplitude.
///
/// A series that never falls below the upper edge of the window does not
/// decay on the sampled interval and is fitted over all its samples.
pub fn fit_decay_rate(series: &[(f64, f64)]) -> Result<f64> {
    let Some(&(_, a0)) = series.first() else {
        return Err(Error::InsufficientWindow { found: 0, required: FIT_MIN_SAMPLES });
    };
    let a0 = a0.abs();
    let (lo, hi) = (FIT_WINDOW.0 * a0, FIT_WINDOW.1 * a0);
    let decayed = series.iter().any(|&(_, a)| a.abs() <= hi);
    if !decayed && series.len() >= FIT_MIN_SAMPLES {
        return log_slope_rate(series);
    }
    let window: Vec<(f64, f64)> = series.iter().copied().filter(|&(_, a)| a.abs() >= lo && a.abs() <= hi).collect();
    if window.len() < FIT_MIN_SAMPLES {
        return Err(Error::InsufficientWindow { found: window.len(), required: FIT_MIN_SAMPLES });
    }
    log_slope_rate(&window)
}

fn log_slope_rate(points: &[(f64, f64)]) -> Result<f64> {
    let k = points.len() as f64;
    let tm = points.iter().map(|p| p.0).sum::<f64>() / k;
    let ym = points.iter().map(|p| p.1.abs().ln()).sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, a) in points {
        sxy += (t - tm) * (a.abs().ln() - ym);
        sxx += (t - tm) * (t - tm);
    }
    let rate = -sxy / sxx;
    if !rate.is_finite() {
        return Err(Error::NonFinite("decay fit"));
    }
    Ok(rate)
}

/// Energy flux of a drifting Maxwellian by quadrature, the Gaussian moment
/// identity, and the zeroth-order expression `5/2 n (T u + |u|^2 u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatFluxCheck {
    pub quadrature: Vec3,
    /// `(d+2)/2 n (T/m) u + 1/2 n |u|^2 u`
    pub identity: Vec3,
    pub printed: Vec3,
    /// `printed - quadrature`
    pub discrepancy: Vec3,
}

pub fn heat_flux_zeroth_check(n: f64, u: Vec3, temperature: f64, m: f64, grid: &VelocityGrid) -> Result<HeatFluxCheck> {
    let f = crate::gaussian::match_moments(&crate::gaussian::TargetMoments { n, u, temperature }, m, grid)?;
    let q = crate::moments::moments(&f, m, grid)?.energy_flux;
    let u = crate::gaussian::truncate(u, grid.dim());
    let d = grid.dim() as f64;
    let u2 = vector::norm2(u);
    let identity = vector::add(vector::scale(0.5 * (d + 2.0) * n * temperature / m, u), vector::scale(0.5 * n * u2, u));
    let printed = vector::scale(2.5 * n, vector::add(vector::scale(temperature, u), vector::scale(u2, u)));
    Ok(HeatFluxCheck { quadrature: q, identity, printed, discrepancy: vector::sub(printed, q) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{maxwellian_on_grid, TargetMoments};
    use crate::params::{EsParams, InteractionSpec, MixingParams, SpeciesSpec};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sym(n: f64, u: Vec3, t: f64) -> SpeciesMacro {
        SpeciesMacro { n, u, temperature: t, mass: 1.0 }
    }

    #[test]
    fn constant_a_examples() {
        assert_eq!(constant_a(1.0, 1.0, 1.0, 2.0, 2.0, 1.0, 1.0), 1.0);
        assert_eq!(constant_a(2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0), 2.0);
        assert!(constant_a(1.0, 1.0, 1e-12, 1.0, 1.0, 1.0, 1.0) < 1e-11);
    }

    #[test]
    fn mixing_coefficient_examples() {
        for delta in [0.0, 0.3, 1.0] {
            let (c1, _) = mixing_coefficients(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, delta, 0.5);
            assert_relative_eq!(c1, delta / 2.0, epsilon = 1e-15);
        }
        let (_, c2) = mixing_coefficients(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 1.0);
        assert_relative_eq!(c2, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn zeroth_moment_examples() {
        let u = [0.3, -0.2, 0.1];
        let z = zeroth_moments(1.0, &[sym(1.0, u, 0.7), sym(1.0, u, 0.7)], 3);
        assert_eq!(z.n_bar, 2.0);
        assert_relative_eq!(z.u_bar[0], u[0], epsilon = 1e-15);
        assert_relative_eq!(z.t_over_m, 0.7, epsilon = 1e-15);
        let du = [0.5, 0.2, 0.0];
        let z2 = zeroth_moments(1.0, &[sym(1.0, vector::add(u, du), 0.7), sym(1.0, u, 0.7)], 3);
        assert_relative_eq!(z2.t_over_m - 0.7, vector::norm2(du) / 12.0, epsilon = 1e-15);
        let z3 = zeroth_moments(1.3, &[sym(2.0, u, 0.7), sym(0.0, [1.0, 1.0, 1.0], 0.2)], 3);
        for i in 0..3 {
            assert_relative_eq!(z3.u_bar[i], u[i], epsilon = 1e-15);
        }
    }

    #[test]
    fn equilibrium_examples() {
        let e = common_equilibrium(1.0, &[sym(1.0, [1.0, 0.0, 0.0], 1.0), sym(1.0, [-1.0, 0.0, 0.0], 1.0)], 3);
        assert_eq!(e.u_bar, [0.0; 3]);
        let e = common_equilibrium(1.7, &[sym(1.0, [0.2; 3], 0.9), sym(0.5, [0.2; 3], 0.9)], 3);
        assert_relative_eq!(e.t_bar, 0.9, epsilon = 1e-15);
    }

    #[test]
    fn a_weighting_matches_conservation_when_a_is_mass_ratio() {
        let s = [
            SpeciesMacro { n: 1.2, u: [0.3, 0.1, 0.0], temperature: 0.8, mass: 1.0 },
            SpeciesMacro { n: 0.7, u: [-0.4, 0.2, 0.1], temperature: 1.3, mass: 2.5 },
        ];
        let a = s[0].mass / s[1].mass;
        let e = common_equilibrium(a, &s, 3);
        let c = conserved_equilibrium(&s, 3);
        for i in 0..3 {
            assert_relative_eq!(e.u_bar[i], c.u_bar[i], epsilon = 1e-14);
        }
        assert_relative_eq!(e.t_bar, c.t_bar, epsilon = 1e-14);
    }

    fn bundle(delta: f64, alpha: f64) -> ParamBundle {
        ParamBundle {
            species: [SpeciesSpec::new("a", 1.0).unwrap(), SpeciesSpec::new("b", 1.0).unwrap()],
            interaction: InteractionSpec::new(1.0, 1.0, 1.0, 1.0).unwrap(),
            mixing: MixingParams { delta, alpha, gamma: 0.0 },
            es: EsParams::bgk(),
        }
    }

    #[test]
    fn prefactor_examples() {
        let c = ce_constants(&bundle(0.0, 0.5), 1.0, 1.0, ScaleInputs::unit()).unwrap();
        assert_eq!(c.c1, 0.0);
        let k = expansion_prefactors(&c, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(k.k_u[0][1], 0.0);
        assert_eq!(k.k_u[1][0], 0.0);
        assert_relative_eq!(k.k_u[0][0], -c.scales.weight(0), epsilon = 1e-15);

        let c = ce_constants(&bundle(1.0, 0.5), 1.0, 1.0, ScaleInputs::unit()).unwrap();
        assert_eq!(c.c1, 0.5);
        assert!(matches!(expansion_prefactors(&c, 1.0, 1.0, 1.0, 1.0), Err(Error::SingularPrefactor { .. })));

        let mut c = ce_constants(&bundle(0.3, 0.5), 1.0, 1.0, ScaleInputs::unit()).unwrap();
        c.c2 = 0.0;
        let k = expansion_prefactors(&c, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(k.k_t[0][1], 0.0);
        assert_eq!(k.k_t[1][0], 0.0);
    }

    #[test]
    fn prefactors_solve_the_coupled_relations() {
        // (1 - c1) u1 + c1 u2 = u_bar - s1 I1/n1 and the species-2 analogue.
        let (n1, n2, m1, m2) = (1.3, 0.6, 1.0, 2.0);
        let p = ParamBundle {
            species: [SpeciesSpec::new("a", m1).unwrap(), SpeciesSpec::new("b", m2).unwrap()],
            interaction: InteractionSpec::new(1.0, 0.7, 1.5, 0.8).unwrap(),
            mixing: MixingParams { delta: 0.4, alpha: 0.2, gamma: 0.0 },
            es: EsParams::bgk(),
        };
        let c = ce_constants(&p, n1, n2, ScaleInputs::unit()).unwrap();
        let k = expansion_prefactors(&c, n1, n2, m1, m2).unwrap();
        let (i1, i2) = (0.37, -1.1);
        let u1 = k.k_u[0][0] * i1 + k.k_u[0][1] * i2;
        let u2 = k.k_u[1][0] * i1 + k.k_u[1][1] * i2;
        let pc = c.a * n1 / n2 * c.c1;
        assert_relative_eq!((1.0 - c.c1) * u1 + c.c1 * u2, -c.scales.weight(0) * i1 / n1, epsilon = 1e-14);
        assert_relative_eq!((1.0 - pc) * u2 + pc * u1, -c.scales.weight(1) * i2 / n2, epsilon = 1e-14);
        let t1 = k.k_t[0][0] * i1 + k.k_t[0][1] * i2;
        let t2 = k.k_t[1][0] * i1 + k.k_t[1][1] * i2;
        let qc = c.a * n1 / n2 * m2 / m1 * c.c2;
        assert_relative_eq!((1.0 - c.c2) * t1 + c.c2 * t2, -c.scales.weight(0) * i1 / (3.0 * n1), epsilon = 1e-14);
        assert_relative_eq!(
            (1.0 - qc) * t2 + qc * t1,
            -c.scales.weight(1) * m2 / m1 * i2 / (3.0 * n2),
            epsilon = 1e-14
        );
    }

    #[test]
    fn prefactors_depend_on_free_parameters() {
        let ku: Vec<f64> = [0.0, 0.2, 0.4, 0.6]
            .iter()
            .map(|&d| {
                let c = ce_constants(&bundle(d, 0.3), 1.0, 1.0, ScaleInputs::unit()).unwrap();
                expansion_prefactors(&c, 1.0, 1.0, 1.0, 1.0).unwrap().k_u[0][0]
            })
            .collect();
        assert!(ku.windows(2).all(|w| (w[0] - w[1]).abs() > 1e-6));
        let kt: Vec<f64> = [0.0, 0.2, 0.4, 0.6]
            .iter()
            .map(|&a| {
                let c = ce_constants(&bundle(0.3, a), 1.0, 1.0, ScaleInputs::unit()).unwrap();
                expansion_prefactors(&c, 1.0, 1.0, 1.0, 1.0).unwrap().k_t[0][0]
            })
            .collect();
        assert!(kt.windows(2).all(|w| (w[0] - w[1]).abs() > 1e-6));
    }

    #[test]
    fn rate_examples() {
        assert_eq!(rate_velocity(1.0, 0.0, 1.0, 1.0, 1.0, 1.0), 2.0);
        assert_eq!(rate_temperature(1.0, 0.5, 1.0, 1.0), 1.0);
        assert_eq!(rate_shear(1.0, 1.0, -0.5), 1.5);
    }

    #[test]
    fn fit_examples() {
        let exact: Vec<(f64, f64)> =
            (0..200).map(|i| (i as f64 * 0.05, 3.0 * (-2.0 * i as f64 * 0.05).exp())).collect();
        assert!((fit_decay_rate(&exact).unwrap() - 2.0).abs() < 1e-6);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let noisy: Vec<(f64, f64)> =
            exact.iter().map(|&(t, a)| (t, a * (1.0 + 1e-3 * rng.gen_range(-1.0..1.0)))).collect();
        assert!((fit_decay_rate(&noisy).unwrap() - 2.0).abs() < 1e-2);

        let flat: Vec<(f64, f64)> = (0..20).map(|i| (i as f64, 0.25)).collect();
        assert!(fit_decay_rate(&flat).unwrap().abs() < 1e-12);

        let short: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, (-(i as f64)).exp())).collect();
        assert!(matches!(fit_decay_rate(&short), Err(Error::InsufficientWindow { .. })));
    }

    #[test]
    fn combination_moments_match_closed_forms() {
        let g = VelocityGrid::reference(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let mut draw = || SpeciesMacro {
                n: rng.gen_range(0.2..2.0),
                u: [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)],
                temperature: rng.gen_range(0.5..1.5),
                mass: rng.gen_range(0.7..2.0),
            };
            let s = [draw(), draw()];
            let a = rng.gen_range(0.2..3.0);
            let f: Vec<_> = s
                .iter()
                .map(|x| {
                    crate::gaussian::match_moments(
                        &TargetMoments { n: x.n, u: x.u, temperature: x.temperature },
                        x.mass,
                        &g,
                    )
                    .unwrap()
                })
                .collect();
            let mut comb = f[1].clone();
            comb.axpy(a, &f[0]);
            let z = zeroth_moments(a, &s, 3);
            let mo = crate::moments::moments(&comb, 1.0, &g).unwrap();
            assert_relative_eq!(mo.n, z.n_bar, max_relative = 1e-8);
            for i in 0..3 {
                assert!((mo.u[i] - z.u_bar[i]).abs() < 1e-8);
            }
            assert_relative_eq!(mo.temperature, z.t_over_m, max_relative = 1e-8);
        }
    }

    #[test]
    fn difference_numerators_vanish_at_equilibrium() {
        let g = VelocityGrid::reference(3);
        let (n1, n2, m1, m2, t) = (1.4, 0.6, 1.0, 2.0, 0.9);
        let u = [0.2, -0.1, 0.05];
        let f1 = maxwellian_on_grid(n1, u, t, m1, &g).unwrap();
        let f2 = maxwellian_on_grid(n2, u, t, m2, &g).unwrap();
        let mut d = f1.scaled(n2 / n1);
        d.axpy(-1.0, &f2);
        let [j0, j1, j2] = g.integrate(|i, v| {
            let x = d.values()[i];
            [x * v[0], x * v[1], x * v[2]]
        });
        assert!(j0.abs() < 1e-12 && j1.abs() < 1e-12 && j2.abs() < 1e-12);
        let mut e = f1.scaled(n2 / n1 * m1 / m2);
        e.axpy(-1.0, &f2);
        let [s] = g.integrate(|i, v| [e.values()[i] * vector::norm2(vector::sub(*v, u))]);
        assert!(s.abs() < 1e-10);
    }

    #[test]
    fn heat_flux_examples() {
        let g = VelocityGrid::reference(3);
        let c = heat_flux_zeroth_check(1.0, [0.0; 3], 1.0, 1.0, &g).unwrap();
        assert!(vector::norm(c.quadrature) < 1e-14 && vector::norm(c.printed) == 0.0);
        let u = [0.2, 0.0, 0.0];
        let c = heat_flux_zeroth_check(1.0, u, 1.0, 1.0, &g).unwrap();
        for i in 0..3 {
            assert!((c.quadrature[i] - c.identity[i]).abs() < 1e-8);
            let want = 2.0 * vector::norm2(u) * u[i];
            assert!((c.discrepancy[i] - want).abs() < 1e-8);
        }
    }
}
