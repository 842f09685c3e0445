//! JSON run configuration.
//!
//! A minimal document names the schema, the two masses, the interaction
//! frequencies and the mixing parameters:
//!
//! ```json
//! {
//!   "schema": "esmix/1",
//!   "masses": [1.0, 2.0],
//!   "interaction": { "nu12": 1.0, "epsilon": 0.5, "beta1": 1.0, "beta2": 1.0 },
//!   "mixing": { "delta": 0.5, "alpha": 0.5, "gamma": 0.0 }
//! }
//! ```
//!
//! Optional sections: `labels`, `es`, `grid`, `initial`, `run`, `space`,
//! `scan`, `persistence`, `scales`, `output`.

use std::path::PathBuf;

use esmix_core::params::{delta_interval, validate_dim, ScaleInputs};
use esmix_core::solver::{Integrator, SpaceSpec, SpeciesInit, Splitting};
use esmix_core::{
    EsParams, InteractionSpec, MixingParams, ParamBundle, SpeciesSpec, SymTensor, Variant, VelocityGrid, Violation,
};
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

pub const SCHEMA: &str = "esmix/1";

const REQUIRED: &[&str] = &[
    "schema",
    "masses",
    "interaction",
    "interaction.nu12",
    "interaction.epsilon",
    "interaction.beta1",
    "interaction.beta2",
    "mixing",
    "mixing.delta",
    "mixing.alpha",
    "mixing.gamma",
];

#[derive(Debug, Clone, Error)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Json(String),
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("unsupported schema `{0}` (expected `{SCHEMA}`)")]
    Schema(String),
    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
    #[error("invalid `{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error("validation failed: {}", list(.0))]
    ValidationFailure(Vec<Violation>),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

fn invalid(key: &str, message: impl ToString) -> ConfigError {
    ConfigError::Invalid { key: key.to_string(), message: message.to_string() }
}

/// Command-line settings that take precedence over the document.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub variant: Option<Variant>,
    pub integrator: Option<Integrator>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSpec {
    pub dt: f64,
    pub t_end: f64,
    pub cadence: usize,
    /// `None` lets each subcommand pick its default.
    pub integrator: Option<Integrator>,
    pub matching: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanParameter {
    Delta,
    Alpha,
}

impl ScanParameter {
    pub fn name(self) -> &'static str {
        match self {
            ScanParameter::Delta => "delta",
            ScanParameter::Alpha => "alpha",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub parameter: ScanParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistenceSpec {
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub count: usize,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ParamBundle,
    pub grid: VelocityGrid,
    pub init: [SpeciesInit; 2],
    pub run: RunSpec,
    pub space: SpaceSpec,
    pub scan: ScanSpec,
    pub persistence: PersistenceSpec,
    pub scales: ScaleInputs,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn densities(&self) -> (f64, f64) {
        (self.init[0].n, self.init[1].n)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema: String,
    masses: [f64; 2],
    #[serde(default)]
    labels: Option<[String; 2]>,
    interaction: RawInteraction,
    mixing: RawMixing,
    #[serde(default)]
    es: RawEs,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    initial: Option<[Option<RawInit>; 2]>,
    #[serde(default)]
    run: RawRun,
    #[serde(default)]
    space: RawSpace,
    #[serde(default)]
    scan: RawScan,
    #[serde(default)]
    persistence: RawPersistence,
    #[serde(default)]
    scales: RawScales,
    #[serde(default)]
    output: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInteraction {
    nu12: f64,
    epsilon: f64,
    beta1: f64,
    beta2: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMixing {
    delta: f64,
    alpha: f64,
    gamma: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawEs {
    variant: String,
    mu1: f64,
    mu2: f64,
    mu12: f64,
    mu21: f64,
}

impl Default for RawEs {
    fn default() -> Self {
        Self { variant: "bgk".into(), mu1: 0.0, mu2: 0.0, mu12: 0.0, mu21: 0.0 }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawGrid {
    dim: usize,
    points: usize,
    vmin: f64,
    vmax: f64,
}

impl Default for RawGrid {
    fn default() -> Self {
        Self { dim: 3, points: 32, vmin: -8.0, vmax: 8.0 }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInit {
    n: f64,
    #[serde(default)]
    u: [f64; 3],
    #[serde(default = "one")]
    temperature: f64,
    #[serde(default)]
    tensor: Option<Vec<Vec<f64>>>,
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawRun {
    dt: f64,
    t_end: f64,
    cadence: usize,
    integrator: Option<String>,
    matching: bool,
}

impl Default for RawRun {
    fn default() -> Self {
        Self { dt: 0.01, t_end: 1.0, cadence: 10, integrator: None, matching: true }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawSpace {
    cells: usize,
    length: f64,
    splitting: String,
    shear_amplitude: f64,
    density_amplitude: f64,
}

impl Default for RawSpace {
    fn default() -> Self {
        Self { cells: 64, length: 10.0, splitting: "lie".into(), shear_amplitude: 0.1, density_amplitude: 0.0 }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct RawScan {
    parameter: Option<String>,
    values: Option<Vec<f64>>,
    from: Option<f64>,
    to: Option<f64>,
    count: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawPersistence {
    kappa_min: f64,
    kappa_max: f64,
    count: usize,
}

impl Default for RawPersistence {
    fn default() -> Self {
        Self { kappa_min: 1e-3, kappa_max: 1e3, count: 200 }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawScales {
    nu_bar12: f64,
    t_bar: f64,
    x_bar: f64,
    n_typical: f64,
}

impl Default for RawScales {
    fn default() -> Self {
        let u = ScaleInputs::unit();
        Self { nu_bar12: u.nu_bar12, t_bar: u.t_bar, x_bar: u.x_bar, n_typical: u.n_typical }
    }
}

fn check_required(doc: &Value) -> Result<(), ConfigError> {
    if !doc.is_object() {
        return Err(ConfigError::Json("top level must be an object".into()));
    }
    for key in REQUIRED {
        let mut node = doc;
        for part in key.split('.') {
            match node.get(part) {
                Some(v) if !v.is_null() => node = v,
                _ => return Err(ConfigError::MissingKey(key.to_string())),
            }
        }
    }
    Ok(())
}

fn tensor(key: &str, rows: &[Vec<f64>], dim: usize) -> Result<SymTensor, ConfigError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(invalid(key, format!("expected a {dim}x{dim} matrix")));
    }
    let mut m = [[0.0; 3]; 3];
    for (i, r) in rows.iter().enumerate() {
        m[i][..dim].copy_from_slice(r);
    }
    let t = SymTensor::from_rows(dim, m);
    if t.asymmetry() > 1e-12 {
        return Err(invalid(key, "matrix is not symmetric"));
    }
    Ok(t)
}

fn linspace(from: f64, to: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..count).map(|i| from + (to - from) * i as f64 / (count - 1) as f64).collect(),
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with(text, &Overrides::default())
}

/// Parses, fills defaults, applies `overrides` and validates the parameters.
pub fn parse_config_with(text: &str, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
    check_required(&doc)?;
    let raw: RawConfig = serde_json::from_value(doc).map_err(|e| ConfigError::Json(e.to_string()))?;
    if raw.schema != SCHEMA {
        return Err(ConfigError::Schema(raw.schema));
    }

    let labels = raw.labels.unwrap_or_else(|| ["1".into(), "2".into()]);
    let [l1, l2] = labels;
    let species = [SpeciesSpec { label: l1, mass: raw.masses[0] }, SpeciesSpec { label: l2, mass: raw.masses[1] }];
    let it = &raw.interaction;
    let interaction = InteractionSpec { nu12: it.nu12, epsilon: it.epsilon, beta1: it.beta1, beta2: it.beta2 };
    let mixing = MixingParams { delta: raw.mixing.delta, alpha: raw.mixing.alpha, gamma: raw.mixing.gamma };
    let variant = match overrides.variant {
        Some(v) => v,
        None => raw.es.variant.parse().map_err(|_| ConfigError::UnknownVariant(raw.es.variant.clone()))?,
    };
    let es = EsParams { variant, mu1: raw.es.mu1, mu2: raw.es.mu2, mu12: raw.es.mu12, mu21: raw.es.mu21 };

    let g = &raw.grid;
    let grid = VelocityGrid::uniform(g.dim, g.points, g.vmin, g.vmax).map_err(|e| invalid("grid", e))?;
    let dim = grid.dim();

    let violations = validate_dim(&species, &interaction, &mixing, &es, dim);
    if !violations.is_empty() {
        return Err(ConfigError::ValidationFailure(violations));
    }
    let params = ParamBundle { species, interaction, mixing, es };

    let init = match raw.initial {
        None => [SpeciesInit::maxwellian(1.0, [0.0; 3], 1.0), SpeciesInit::maxwellian(1.0, [0.0; 3], 1.0)],
        Some(list) => {
            let mut out = [SpeciesInit::empty(), SpeciesInit::empty()];
            for (k, entry) in list.into_iter().enumerate() {
                let key = format!("initial[{k}]");
                if let Some(r) = entry {
                    if !(r.n >= 0.0 && r.n.is_finite()) {
                        return Err(invalid(&key, "density must be nonnegative"));
                    }
                    if !(r.temperature > 0.0 && r.temperature.is_finite()) {
                        return Err(invalid(&key, "temperature must be positive"));
                    }
                    let tensor = r.tensor.as_deref().map(|t| tensor(&key, t, dim)).transpose()?;
                    out[k] = SpeciesInit { n: r.n, u: r.u, temperature: r.temperature, tensor };
                }
            }
            out
        }
    };

    let integrator = match overrides.integrator {
        Some(i) => Some(i),
        None => raw
            .run
            .integrator
            .as_deref()
            .map(|s| s.parse::<Integrator>().map_err(|e| invalid("run.integrator", e)))
            .transpose()?,
    };
    let run = RunSpec {
        dt: raw.run.dt,
        t_end: raw.run.t_end,
        cadence: raw.run.cadence,
        integrator,
        matching: raw.run.matching,
    };

    let splitting = match raw.space.splitting.to_ascii_lowercase().as_str() {
        "lie" => Splitting::Lie,
        "strang" => Splitting::Strang,
        other => return Err(invalid("space.splitting", format!("unknown splitting `{other}`"))),
    };
    let space = SpaceSpec {
        cells: raw.space.cells,
        length: raw.space.length,
        splitting,
        shear_amplitude: raw.space.shear_amplitude,
        density_amplitude: raw.space.density_amplitude,
    };

    let parameter = match raw.scan.parameter.as_deref().unwrap_or("delta") {
        "delta" => ScanParameter::Delta,
        "alpha" => ScanParameter::Alpha,
        other => return Err(invalid("scan.parameter", format!("expected delta or alpha, got `{other}`"))),
    };
    let values = match raw.scan.values {
        Some(v) => v,
        None => {
            let [m1, m2] = params.masses();
            let lo = match parameter {
                ScanParameter::Delta => {
                    delta_interval(m1, m2, params.interaction.epsilon).map(|(lo, _)| lo).unwrap_or(0.0)
                }
                ScanParameter::Alpha => 0.0,
            };
            linspace(raw.scan.from.unwrap_or(lo), raw.scan.to.unwrap_or(0.9), raw.scan.count.unwrap_or(5))
        }
    };
    if values.is_empty() {
        return Err(invalid("scan", "no parameter values"));
    }

    let p = &raw.persistence;
    if !(p.kappa_min > 0.0 && p.kappa_max >= p.kappa_min && p.count > 0) {
        return Err(invalid("persistence", "need 0 < kappa_min <= kappa_max and count > 0"));
    }
    let s = &raw.scales;

    Ok(RunConfig {
        params,
        grid,
        init,
        run,
        space,
        scan: ScanSpec { parameter, values },
        persistence: PersistenceSpec { kappa_min: p.kappa_min, kappa_max: p.kappa_max, count: p.count },
        scales: ScaleInputs { nu_bar12: s.nu_bar12, t_bar: s.t_bar, x_bar: s.x_bar, n_typical: s.n_typical },
        output: overrides.output.clone().or(raw.output),
    })
}
