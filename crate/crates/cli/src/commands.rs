//! Subcommand execution.

use esmix_core::chapman::{analytic_rates, ce_constants, expansion_prefactors, fit_decay_rate};
use esmix_core::params::{gamma_upper_bound_dim, validate_dim};
use esmix_core::persistence::{log_grid, persistence_lower_bound, persistence_unequal_mass};
use esmix_core::solver::{run_scenario, Diagnostics, Integrator, Record, Scenario, SpeciesInit};
use esmix_core::{vector, Error};

use crate::config::{ConfigError, RunConfig, ScanParameter};
use crate::table::{diagnostics_table, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Relax,
    Wave,
    Coeffs,
    Persistence,
    Scan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Relax => "relax",
            Command::Wave => "wave",
            Command::Coeffs => "coeffs",
            Command::Persistence => "persistence",
            Command::Scan => "scan",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 1 for rejected input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

/// Runs `cmd`; every command except `validate` produces a table.
pub fn execute(cmd: Command, cfg: &RunConfig) -> Result<Option<Table>, CliError> {
    match cmd {
        Command::Validate => Ok(None),
        Command::Relax => Ok(Some(diagnostics_table(&relax(cfg, false)?))),
        Command::Wave => Ok(Some(diagnostics_table(&relax(cfg, true)?))),
        Command::Coeffs => coeffs(cfg).map(Some),
        Command::Persistence => persistence(cfg).map(Some),
        Command::Scan => scan(cfg).map(Some),
    }
}

fn scenario(cfg: &RunConfig, space: bool) -> Scenario {
    Scenario {
        params: cfg.params.clone(),
        grid: cfg.grid.clone(),
        init: cfg.init.clone(),
        dt: cfg.run.dt,
        t_end: cfg.run.t_end,
        cadence: cfg.run.cadence,
        integrator: cfg.run.integrator.unwrap_or(Integrator::Exp),
        matching: cfg.run.matching,
        space: space.then_some(cfg.space),
    }
}

fn relax(cfg: &RunConfig, space: bool) -> Result<Diagnostics, CliError> {
    Ok(run_scenario(&scenario(cfg, space))?)
}

fn coeffs(cfg: &RunConfig) -> Result<Table, CliError> {
    let (n1, n2) = cfg.densities();
    if !(n1 > 0.0 && n2 > 0.0) {
        return Err(CliError::Usage("coeffs needs both species present".into()));
    }
    let [m1, m2] = cfg.params.masses();
    let c = ce_constants(&cfg.params, n1, n2, cfg.scales)?;
    let k = expansion_prefactors(&c, n1, n2, m1, m2)?;
    let r = analytic_rates(&cfg.params, n1, n2)?;
    let mut t = Table::new([
        "n1",
        "n2",
        "A",
        "c1",
        "c2",
        "lambda_u",
        "lambda_T",
        "lambda_shear1",
        "lambda_shear2",
        "Ku11",
        "Ku12",
        "Ku21",
        "Ku22",
        "KT11",
        "KT12",
        "KT21",
        "KT22",
    ]);
    let mut row = vec![n1, n2, c.a, c.c1, c.c2, r.lambda_u, r.lambda_t, r.lambda_shear[0], r.lambda_shear[1]];
    row.extend(k.k_u.iter().flatten());
    row.extend(k.k_t.iter().flatten());
    t.push_floats(row);
    Ok(t)
}

fn persistence(cfg: &RunConfig) -> Result<Table, CliError> {
    let [m1, m2] = cfg.params.masses();
    let p = &cfg.persistence;
    let bound = persistence_lower_bound(m1, m2)?;
    let mut t = Table::new(["kappa", "ratio", "lower_bound"]);
    for kappa in log_grid(p.kappa_min, p.kappa_max, p.count) {
        t.push_floats([kappa, persistence_unequal_mass(kappa, m1, m2)?, bound]);
    }
    Ok(t)
}

/// Relative size of the linear-regime perturbation.
const SCAN_PERTURBATION: f64 = 1e-3;

fn scan(cfg: &RunConfig) -> Result<Table, CliError> {
    let (n1, n2) = cfg.densities();
    if !(n1 > 0.0 && n2 > 0.0) {
        return Err(CliError::Usage("scan needs both species present".into()));
    }
    let [m1, m2] = cfg.params.masses();
    let temp = cfg.init[0].temperature;
    let dim = cfg.grid.dim();
    let which = cfg.scan.parameter;
    let mut t = Table::new([which.name(), "lambda_measured", "lambda_analytic"]);
    for &value in &cfg.scan.values {
        let mut params = cfg.params.clone();
        match which {
            ScanParameter::Delta => {
                params.mixing.delta = value;
                // gamma plays no part in the linear rate; keep it admissible
                if let Ok(b) = gamma_upper_bound_dim(value, m1, m2, params.interaction.epsilon, dim) {
                    params.mixing.gamma = params.mixing.gamma.min(b);
                }
            }
            ScanParameter::Alpha => params.mixing.alpha = value,
        }
        let v = validate_dim(&params.species, &params.interaction, &params.mixing, &params.es, dim);
        if !v.is_empty() {
            return Err(ConfigError::ValidationFailure(v).into());
        }
        let rates = analytic_rates(&params, n1, n2)?;
        let (init, analytic, amplitude): (_, _, fn(&Record) -> f64) = match which {
            ScanParameter::Delta => {
                let du = SCAN_PERTURBATION * (temp / m1.max(m2)).sqrt();
                (
                    [
                        SpeciesInit::maxwellian(n1, [0.5 * du, 0.0, 0.0], temp),
                        SpeciesInit::maxwellian(n2, [-0.5 * du, 0.0, 0.0], temp),
                    ],
                    rates.lambda_u,
                    |r| vector::norm(vector::sub(moment(r, 0).u, moment(r, 1).u)),
                )
            }
            ScanParameter::Alpha => (
                [
                    SpeciesInit::maxwellian(n1, [0.0; 3], temp * (1.0 + 0.5 * SCAN_PERTURBATION)),
                    SpeciesInit::maxwellian(n2, [0.0; 3], temp * (1.0 - 0.5 * SCAN_PERTURBATION)),
                ],
                rates.lambda_t,
                |r| (moment(r, 0).temperature - moment(r, 1).temperature).abs(),
            ),
        };
        let scale = analytic.max(0.05 * params.interaction.nu12 * (n1 + n2));
        let dt = 0.05 / scale;
        let mut sc = Scenario::homogeneous(params, cfg.grid.clone(), init, dt, 300.0 * dt);
        sc.integrator = cfg.run.integrator.unwrap_or(Integrator::Rk4);
        sc.matching = cfg.run.matching;
        let d = run_scenario(&sc)?;
        let measured = fit_decay_rate(&d.series(amplitude))?;
        t.push_floats([value, measured, analytic]);
    }
    Ok(t)
}

fn moment(r: &Record, k: usize) -> &esmix_core::MomentSet {
    r.species[k].as_ref().expect("both species are present in a scan")
}
