//! Mixture velocities and temperatures, ellipsoidal tensors, and the four
//! relaxation targets of each model variant.

use crate::error::{Error, Result};
use crate::gaussian::{gaussian_on_grid, match_gaussian, match_moments_report, maxwellian_on_grid, TargetMoments};
use crate::grid::{Distribution, VelocityGrid};
use crate::linalg::{spd_factor, SpdTensor, SymTensor};
use crate::moments::{moments, MomentSet};
use crate::params::{MixingParams, ParamBundle, Variant};
use crate::vector::{self, Vec3};

/// Moments of both species. An empty species (density below the floor) is
/// `None`; its cross interaction then carries zero weight.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureState {
    pub species: [Option<MomentSet>; 2],
    pub masses: [f64; 2],
}

impl MixtureState {
    pub fn new(species: [Option<MomentSet>; 2], masses: [f64; 2]) -> Self {
        Self { species, masses }
    }

    pub fn from_distributions(f: [&Distribution; 2], masses: [f64; 2], grid: &VelocityGrid) -> Result<Self> {
        let mut species = [None, None];
        for k in 0..2 {
            species[k] = match moments(f[k], masses[k], grid) {
                Ok(mo) => Some(mo),
                Err(Error::DegenerateDensity { .. }) => None,
                Err(e) => return Err(e),
            };
        }
        Ok(Self { species, masses })
    }

    /// Density of species `k`, zero when empty.
    pub fn density(&self, k: usize) -> f64 {
        self.species[k].as_ref().map_or(0.0, |m| m.n)
    }
}

/// `(u12, u21)`
pub fn mixture_velocities(u1: Vec3, u2: Vec3, m1: f64, m2: f64, delta: f64, epsilon: f64) -> (Vec3, Vec3) {
    let u12 = vector::add(vector::scale(delta, u1), vector::scale(1.0 - delta, u2));
    let u21 = vector::sub(u2, vector::scale(m1 / m2 * epsilon * (1.0 - delta), vector::sub(u2, u1)));
    (u12, u21)
}

/// Coefficient of `|u1 - u2|^2` in `T21`.
pub fn drift_coefficient_21(m1: f64, m2: f64, mixing: &MixingParams, epsilon: f64, dim: usize) -> f64 {
    let d = mixing.delta;
    epsilon * m1 * (1.0 - d) * (m1 / m2 * epsilon * (d - 1.0) + d + 1.0) / dim as f64 - epsilon * mixing.gamma
}

/// `(T12, T21)` in `dim` velocity dimensions.
#[allow(clippy::too_many_arguments)]
pub fn mixture_temperatures(
    t1: f64,
    t2: f64,
    u1: Vec3,
    u2: Vec3,
    m1: f64,
    m2: f64,
    mixing: &MixingParams,
    epsilon: f64,
    dim: usize,
) -> (f64, f64) {
    let a = mixing.alpha;
    let du2 = vector::norm2(vector::sub(u1, u2));
    let t12 = a * t1 + (1.0 - a) * t2 + mixing.gamma * du2;
    let w = epsilon * (1.0 - a);
    let t21 = drift_coefficient_21(m1, m2, mixing, epsilon, dim) * du2 + w * t1 + (1.0 - w) * t2;
    (t12, t21)
}

/// `(1 - mu) T I + mu P/n`
pub fn es_tensor_self(temperature: f64, pressure: &SymTensor, n: f64, mu: f64) -> Result<SpdTensor> {
    let t = SymTensor::scalar(pressure.dim(), (1.0 - mu) * temperature).add(&pressure.scale(mu / n));
    spd_factor(&t)
}

/// Form of the ellipsoidal cross tensors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossTensorForm {
    /// Scalar and tensor parts of both species mixed with `mu12`, `mu21`.
    A { mu12: f64, mu21: f64 },
    /// Tensor part of the relaxing species only.
    B,
}

/// `(T12, T21)` tensors for two non-empty species.
///
/// In form A each pressure tensor is normalized by its own density, so that
/// `tr T12 / d` and `tr T21 / d` reproduce the scalar mixture temperatures.
pub fn es_tensor_cross(
    s1: &MomentSet,
    s2: &MomentSet,
    masses: [f64; 2],
    mixing: &MixingParams,
    epsilon: f64,
    form: CrossTensorForm,
) -> Result<(SpdTensor, SpdTensor)> {
    let dim = s1.dim();
    let [m1, m2] = masses;
    let a = mixing.alpha;
    let w = epsilon * (1.0 - a);
    let du2 = vector::norm2(vector::sub(s1.u, s2.u));
    let heat12 = mixing.gamma * du2;
    let heat21 = drift_coefficient_21(m1, m2, mixing, epsilon, dim) * du2;
    let p1 = s1.pressure_per_particle();
    let p2 = s2.pressure_per_particle();
    let (t12, t21) = match form {
        CrossTensorForm::A { mu12, mu21 } => {
            let scalar12 = a * s1.temperature + (1.0 - a) * s2.temperature;
            let tensor12 = p1.scale(a).add(&p2.scale(1.0 - a));
            let scalar21 = (1.0 - w) * s2.temperature + w * s1.temperature;
            let tensor21 = p2.scale(1.0 - w).add(&p1.scale(w));
            (
                SymTensor::scalar(dim, (1.0 - mu12) * scalar12 + heat12).add(&tensor12.scale(mu12)),
                SymTensor::scalar(dim, (1.0 - mu21) * scalar21 + heat21).add(&tensor21.scale(mu21)),
            )
        }
        CrossTensorForm::B => (
            p1.scale(a).add_scalar((1.0 - a) * s2.temperature + heat12),
            p2.scale(1.0 - w).add_scalar(w * s1.temperature + heat21),
        ),
    };
    Ok((spd_factor(&t12)?, spd_factor(&t21)?))
}

/// Cross-interaction values kept for inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossValues {
    pub u12: Vec3,
    pub u21: Vec3,
    pub t12: f64,
    pub t21: f64,
}

/// What a [`TargetSet`] was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetAudit {
    pub variant: Variant,
    pub matching: bool,
    pub cross: Option<CrossValues>,
    /// Total Newton iterations over all matched targets.
    pub newton_iterations: usize,
}

/// Self and cross targets per species; `None` where the species, or for the
/// cross target its partner, is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSet {
    pub self_targets: [Option<Distribution>; 2],
    pub cross_targets: [Option<Distribution>; 2],
    pub audit: TargetAudit,
}

fn maxwellian_target(
    n: f64,
    u: Vec3,
    temperature: f64,
    m: f64,
    grid: &VelocityGrid,
    matching: bool,
    iterations: &mut usize,
) -> Result<Distribution> {
    if matching {
        let (f, rep) = match_moments_report(&TargetMoments { n, u, temperature }, m, grid)?;
        *iterations += rep.iterations;
        Ok(f)
    } else {
        maxwellian_on_grid(n, u, temperature, m, grid)
    }
}

fn gaussian_target(
    n: f64,
    u: Vec3,
    tensor: &SpdTensor,
    m: f64,
    grid: &VelocityGrid,
    matching: bool,
    iterations: &mut usize,
) -> Result<Distribution> {
    if matching {
        let (f, rep) = match_gaussian(n, u, tensor, m, grid)?;
        *iterations += rep.iterations;
        Ok(f)
    } else {
        gaussian_on_grid(n, u, tensor, m, grid)
    }
}

/// Self target of one species under `variant`.
pub fn build_self_target(
    mo: &MomentSet,
    m: f64,
    variant: Variant,
    mu: f64,
    grid: &VelocityGrid,
    matching: bool,
) -> Result<Distribution> {
    self_target(mo, m, variant, mu, grid, matching, &mut 0)
}

fn self_target(
    mo: &MomentSet,
    m: f64,
    variant: Variant,
    mu: f64,
    grid: &VelocityGrid,
    matching: bool,
    iterations: &mut usize,
) -> Result<Distribution> {
    if variant.has_es_self() {
        let t = es_tensor_self(mo.temperature, &mo.pressure, mo.n, mu)?;
        gaussian_target(mo.n, mo.u, &t, m, grid, matching, iterations)
    } else {
        maxwellian_target(mo.n, mo.u, mo.temperature, m, grid, matching, iterations)
    }
}

/// All targets for `state` under the variant in `params.es`.
pub fn build_targets(
    state: &MixtureState,
    params: &ParamBundle,
    grid: &VelocityGrid,
    matching: bool,
) -> Result<TargetSet> {
    let variant = params.es.variant;
    let masses = state.masses;
    let mut iterations = 0;
    let mut self_targets = [None, None];
    for k in 0..2 {
        if let Some(mo) = &state.species[k] {
            let mu = params.es.self_mu(k);
            self_targets[k] = Some(self_target(mo, masses[k], variant, mu, grid, matching, &mut iterations)?);
        }
    }

    let mut cross_targets = [None, None];
    let mut cross = None;
    if let [Some(s1), Some(s2)] = &state.species {
        let eps = params.interaction.epsilon;
        let mix = &params.mixing;
        let [m1, m2] = masses;
        let (u12, u21) = mixture_velocities(s1.u, s2.u, m1, m2, mix.delta, eps);
        let (t12, t21) = mixture_temperatures(s1.temperature, s2.temperature, s1.u, s2.u, m1, m2, mix, eps, grid.dim());
        let form = match variant {
            Variant::EsFullA => Some(CrossTensorForm::A { mu12: params.es.mu12, mu21: params.es.mu21 }),
            Variant::EsFullB => Some(CrossTensorForm::B),
            Variant::Bgk | Variant::EsSelfOnly => None,
        };
        let (g12, g21) = match form {
            Some(form) => {
                let (a, b) = es_tensor_cross(s1, s2, masses, mix, eps, form)?;
                (
                    gaussian_target(s1.n, u12, &a, m1, grid, matching, &mut iterations)?,
                    gaussian_target(s2.n, u21, &b, m2, grid, matching, &mut iterations)?,
                )
            }
            None => (
                maxwellian_target(s1.n, u12, t12, m1, grid, matching, &mut iterations)?,
                maxwellian_target(s2.n, u21, t21, m2, grid, matching, &mut iterations)?,
            ),
        };
        cross_targets = [Some(g12), Some(g21)];
        cross = Some(CrossValues { u12, u21, t12, t21 });
    }

    Ok(TargetSet {
        self_targets,
        cross_targets,
        audit: TargetAudit { variant, matching, cross, newton_iterations: iterations },
    })
}
