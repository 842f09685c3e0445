//! Model parameters of the two-species relaxation model.
//!
//! Temperatures carry the Boltzmann constant (`T` stands for `k_B T`) and
//! masses are in model units. Collision frequencies `nu_kj` multiply the
//! partner density: the relaxation rate of species `k` towards its cross
//! target is `nu_kj * n_j`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Lower end of the admissible range of every ES mixing weight.
pub const MU_MIN: f64 = -0.5;
/// Upper end of the admissible range of every ES mixing weight.
pub const MU_MAX: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesSpec {
    pub label: String,
    pub mass: f64,
}

impl SpeciesSpec {
    pub fn new(label: impl Into<String>, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::out_of_range("mass", mass, "> 0"));
        }
        Ok(Self { label: label.into(), mass })
    }
}

/// Interspecies frequency coefficient and the ratios tying the other three
/// frequencies to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionSpec {
    pub nu12: f64,
    /// `nu12 / nu21`, in `(0, 1]`.
    pub epsilon: f64,
    /// `nu11 / nu12`.
    pub beta1: f64,
    /// `nu22 / nu21`.
    pub beta2: f64,
}

impl InteractionSpec {
    pub fn new(nu12: f64, epsilon: f64, beta1: f64, beta2: f64) -> Result<Self> {
        let spec = Self { nu12, epsilon, beta1, beta2 };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::out_of_range("epsilon", self.epsilon, "(0, 1]"));
        }
        for (name, value) in [("nu12", self.nu12), ("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::out_of_range(name, value, "> 0"));
            }
        }
        Ok(())
    }
}

/// The four collision frequencies of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequencies {
    pub nu11: f64,
    pub nu12: f64,
    pub nu21: f64,
    pub nu22: f64,
}

impl Frequencies {
    /// Self-collision frequency of species `k` (0-based).
    pub fn self_freq(&self, k: usize) -> f64 {
        if k == 0 {
            self.nu11
        } else {
            self.nu22
        }
    }

    /// Cross-collision frequency of species `k` with its partner.
    pub fn cross_freq(&self, k: usize) -> f64 {
        if k == 0 {
            self.nu12
        } else {
            self.nu21
        }
    }
}

/// `nu21 = nu12 / epsilon`, `nu11 = beta1 nu12`, `nu22 = beta2 nu21`.
pub fn derive_frequencies(inter: &InteractionSpec) -> Result<Frequencies> {
    inter.check()?;
    let nu21 = inter.nu12 / inter.epsilon;
    Ok(Frequencies { nu11: inter.beta1 * inter.nu12, nu12: inter.nu12, nu21, nu22: inter.beta2 * nu21 })
}

/// Interpolation weights of the mixture Maxwellians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingParams {
    pub delta: f64,
    pub alpha: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Maxwellian targets everywhere.
    Bgk,
    /// Ellipsoidal self targets, Maxwellian cross targets.
    EsSelfOnly,
    /// Ellipsoidal cross targets mixing scalar and tensor parts with `mu12`, `mu21`.
    EsFullA,
    /// Ellipsoidal cross targets keeping the pressure tensor of the relaxing species.
    EsFullB,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Bgk, Variant::EsSelfOnly, Variant::EsFullA, Variant::EsFullB];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Bgk => "bgk",
            Variant::EsSelfOnly => "es-self",
            Variant::EsFullA => "es-full-a",
            Variant::EsFullB => "es-full-b",
        }
    }

    pub fn has_es_self(self) -> bool {
        !matches!(self, Variant::Bgk)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "bgk" => Ok(Variant::Bgk),
            "es-self" | "es-self-only" => Ok(Variant::EsSelfOnly),
            "es-full-a" => Ok(Variant::EsFullA),
            "es-full-b" => Ok(Variant::EsFullB),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsParams {
    pub variant: Variant,
    pub mu1: f64,
    pub mu2: f64,
    /// Only read by [`Variant::EsFullA`].
    pub mu12: f64,
    /// Only read by [`Variant::EsFullA`].
    pub mu21: f64,
}

impl EsParams {
    pub fn bgk() -> Self {
        Self { variant: Variant::Bgk, mu1: 0.0, mu2: 0.0, mu12: 0.0, mu21: 0.0 }
    }

    pub fn self_mu(&self, k: usize) -> f64 {
        if k == 0 {
            self.mu1
        } else {
            self.mu2
        }
    }
}

impl Default for EsParams {
    fn default() -> Self {
        Self::bgk()
    }
}

/// Everything the relaxation operator needs besides the state.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBundle {
    pub species: [SpeciesSpec; 2],
    pub interaction: InteractionSpec,
    pub mixing: MixingParams,
    pub es: EsParams,
}

impl ParamBundle {
    pub fn masses(&self) -> [f64; 2] {
        [self.species[0].mass, self.species[1].mass]
    }

    pub fn frequencies(&self) -> Result<Frequencies> {
        derive_frequencies(&self.interaction)
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(&self.species, &self.interaction, &self.mixing, &self.es)
    }
}

/// Admissible `delta` interval `[(r - 1)/(1 + r), 1]`, `r = epsilon m1 / m2`.
pub fn delta_interval(m1: f64, m2: f64, epsilon: f64) -> Result<(f64, f64)> {
    check_masses_epsilon(m1, m2, epsilon)?;
    let r = epsilon * m1 / m2;
    Ok(((r - 1.0) / (1.0 + r), 1.0))
}

/// Upper bound on `gamma` keeping every mixture temperature nonnegative,
/// for 3 velocity dimensions. Rejects `delta` outside [`delta_interval`].
pub fn gamma_upper_bound(delta: f64, m1: f64, m2: f64, epsilon: f64) -> Result<f64> {
    gamma_upper_bound_dim(delta, m1, m2, epsilon, 3)
}

/// [`gamma_upper_bound`] for a `dim`-dimensional velocity space.
pub fn gamma_upper_bound_dim(delta: f64, m1: f64, m2: f64, epsilon: f64, dim: usize) -> Result<f64> {
    let (lo, hi) = delta_interval(m1, m2, epsilon)?;
    if !(delta >= lo && delta <= hi) {
        return Err(Error::out_of_range("delta", delta, format!("[{lo}, {hi}]")));
    }
    Ok(gamma_bound_formula(delta, m1, m2, epsilon, dim))
}

/// The bound polynomial `(m1/d)(1 - delta)[(1 + r) delta + 1 - r]` evaluated
/// without any range check; negative outside the admissible `delta` interval.
pub fn gamma_bound_formula(delta: f64, m1: f64, m2: f64, epsilon: f64, dim: usize) -> f64 {
    let r = epsilon * m1 / m2;
    // (1 + r) delta + 1 - r written around the interval's lower end so the
    // sign is exact at the endpoint
    let lower = (r - 1.0) / (1.0 + r);
    m1 / dim as f64 * (1.0 - delta) * ((1.0 + r) * (delta - lower))
}

fn check_masses_epsilon(m1: f64, m2: f64, epsilon: f64) -> Result<()> {
    if !(m1 > 0.0) {
        return Err(Error::out_of_range("m1", m1, "> 0"));
    }
    if !(m2 > 0.0) {
        return Err(Error::out_of_range("m2", m2, "> 0"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::out_of_range("epsilon", epsilon, "(0, 1]"));
    }
    Ok(())
}

/// One violated admissibility condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub parameter: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.parameter, self.message)
    }
}

/// Checks every parameter record and collects all violations (empty when the
/// bundle is admissible). The gamma bound is the 3D one.
pub fn validate(
    species: &[SpeciesSpec; 2],
    inter: &InteractionSpec,
    mixing: &MixingParams,
    es: &EsParams,
) -> Vec<Violation> {
    validate_dim(species, inter, mixing, es, 3)
}

pub fn validate_dim(
    species: &[SpeciesSpec; 2],
    inter: &InteractionSpec,
    mixing: &MixingParams,
    es: &EsParams,
    dim: usize,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |parameter: &'static str, message: String| out.push(Violation { parameter, message });

    let mass_names = ["m1", "m2"];
    for (s, name) in species.iter().zip(mass_names) {
        if !(s.mass > 0.0 && s.mass.is_finite()) {
            push(name, format!("mass {} must be positive", s.mass));
        }
    }
    if !(inter.nu12 > 0.0 && inter.nu12.is_finite()) {
        push("nu12", format!("nu12 = {} must be positive", inter.nu12));
    }
    if !(inter.epsilon > 0.0 && inter.epsilon <= 1.0) {
        push("epsilon", format!("epsilon = {} outside (0, 1]", inter.epsilon));
    }
    if !(inter.beta1 > 0.0 && inter.beta1.is_finite()) {
        push("beta1", format!("beta1 = {} must be positive", inter.beta1));
    }
    if !(inter.beta2 > 0.0 && inter.beta2.is_finite()) {
        push("beta2", format!("beta2 = {} must be positive", inter.beta2));
    }
    if !(0.0..=1.0).contains(&mixing.alpha) {
        push("alpha", format!("alpha = {} outside [0, 1]", mixing.alpha));
    }
    if !(mixing.gamma >= 0.0) {
        push("gamma", format!("gamma = {} must be nonnegative", mixing.gamma));
    }

    let (m1, m2) = (species[0].mass, species[1].mass);
    if let Ok((lo, hi)) = delta_interval(m1, m2, inter.epsilon) {
        if !(mixing.delta >= lo && mixing.delta <= hi) {
            push("delta", format!("delta = {} outside admissible interval [{lo}, {hi}]", mixing.delta));
        } else {
            let bound = gamma_bound_formula(mixing.delta, m1, m2, inter.epsilon, dim);
            if mixing.gamma > bound {
                push("gamma", format!("gamma = {} exceeds temperature positivity bound {bound}", mixing.gamma));
            }
        }
    }

    let mut check_mu = |name: &'static str, mu: f64| {
        if !(MU_MIN..=MU_MAX).contains(&mu) {
            push(name, format!("{name} = {mu} outside [-1/2, 1]"));
        }
    };
    check_mu("mu1", es.mu1);
    check_mu("mu2", es.mu2);
    if es.variant == Variant::EsFullA {
        check_mu("mu12", es.mu12);
        check_mu("mu21", es.mu21);
    }
    out
}

/// Knudsen-type scales of the dimensionless model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessScales {
    pub eps1: f64,
    pub eps_tilde1: f64,
    pub eps2: f64,
    pub eps_tilde2: f64,
}

impl DimensionlessScales {
    /// `1 / (1/eps_k + 1/eps_tilde_k)` for species `k` (0-based).
    pub fn weight(&self, k: usize) -> f64 {
        let (a, b) = if k == 0 { (self.eps1, self.eps_tilde1) } else { (self.eps2, self.eps_tilde2) };
        1.0 / (1.0 / a + 1.0 / b)
    }
}

/// Reference values entering the dimensionless scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleInputs {
    /// Typical interspecies collision frequency.
    pub nu_bar12: f64,
    /// Typical time.
    pub t_bar: f64,
    /// Typical length.
    pub x_bar: f64,
    /// Typical particle number in a cube of side `x_bar`.
    pub n_typical: f64,
}

impl ScaleInputs {
    /// All reference values 1, so that `nu_bar12 t_bar N / x_bar = 1`.
    pub fn unit() -> Self {
        Self { nu_bar12: 1.0, t_bar: 1.0, x_bar: 1.0, n_typical: 1.0 }
    }
}

impl Default for ScaleInputs {
    fn default() -> Self {
        Self::unit()
    }
}

pub fn dimensionless_scales(
    inputs: ScaleInputs,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    n1: f64,
    n2: f64,
) -> Result<DimensionlessScales> {
    let named = [
        ("nu_bar12", inputs.nu_bar12),
        ("t_bar", inputs.t_bar),
        ("x_bar", inputs.x_bar),
        ("N", inputs.n_typical),
        ("beta1", beta1),
        ("beta2", beta2),
        ("epsilon", epsilon),
        ("n1", n1),
        ("n2", n2),
    ];
    for (name, value) in named {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::out_of_range(name, value, "> 0"));
        }
    }
    let inv_eps1 = beta1 * inputs.nu_bar12 * inputs.t_bar * inputs.n_typical / inputs.x_bar;
    let inv_eps_tilde1 = inv_eps1 / beta1 * (n2 / n1);
    let inv_eps_tilde2 = inv_eps1 / beta1 / epsilon;
    let inv_eps2 = inv_eps1 * (beta2 / (beta1 * epsilon)) * (n2 / n1);
    Ok(DimensionlessScales {
        eps1: 1.0 / inv_eps1,
        eps_tilde1: 1.0 / inv_eps_tilde1,
        eps2: 1.0 / inv_eps2,
        eps_tilde2: 1.0 / inv_eps_tilde2,
    })
}
