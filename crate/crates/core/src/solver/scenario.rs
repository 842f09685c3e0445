//! Scenario setup, time stepping and diagnostics.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{relax_step, transport_step, Integrator, RelaxationModel};
use crate::error::{Error, Result};
use crate::gaussian::{gaussian_on_grid, match_gaussian, match_moments, maxwellian_on_grid, truncate, TargetMoments};
use crate::grid::{Distribution, VelocityGrid};
use crate::linalg::{spd_factor, SymTensor};
use crate::moments::{h_single, moments, MomentSet};
use crate::params::{validate_dim, ParamBundle};
use crate::vector::{self, Vec3};

/// Initial Maxwellian, or anisotropic Gaussian when `tensor` is set (its
/// trace then fixes the temperature and `temperature` is ignored).
#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesInit {
    pub n: f64,
    pub u: Vec3,
    pub temperature: f64,
    pub tensor: Option<SymTensor>,
}

impl SpeciesInit {
    pub fn maxwellian(n: f64, u: Vec3, temperature: f64) -> Self {
        Self { n, u, temperature, tensor: None }
    }

    pub fn empty() -> Self {
        Self::maxwellian(0.0, [0.0; 3], 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Splitting {
    /// Transport, then relaxation.
    #[default]
    Lie,
    /// Half relaxation, transport, half relaxation.
    Strang,
}

/// Periodic 1D domain `[0, length)` along the first velocity axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceSpec {
    pub cells: usize,
    pub length: f64,
    pub splitting: Splitting,
    /// Amplitude of `u_y(x) += A sin(2 pi x / L)`.
    pub shear_amplitude: f64,
    /// Amplitude of `n(x) = n (1 + A cos(2 pi x / L))`.
    pub density_amplitude: f64,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: ParamBundle,
    pub grid: VelocityGrid,
    pub init: [SpeciesInit; 2],
    pub dt: f64,
    pub t_end: f64,
    /// Steps between diagnostic records.
    pub cadence: usize,
    pub integrator: Integrator,
    pub matching: bool,
    /// `None` for a space-homogeneous run.
    pub space: Option<SpaceSpec>,
}

impl Scenario {
    /// Homogeneous scenario with moment matching and the exponential integrator.
    pub fn homogeneous(params: ParamBundle, grid: VelocityGrid, init: [SpeciesInit; 2], dt: f64, t_end: f64) -> Self {
        Self { params, grid, init, dt, t_end, cadence: 1, integrator: Integrator::Exp, matching: true, space: None }
    }

    /// Number of time steps, `round(t_end / dt)`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if !(self.t_end >= self.dt) {
            return bad(format!("t_end = {} must be at least dt = {}", self.t_end, self.dt));
        }
        if self.cadence == 0 {
            return bad("cadence must be at least 1".into());
        }
        let violations = validate_dim(
            &self.params.species,
            &self.params.interaction,
            &self.params.mixing,
            &self.params.es,
            self.grid.dim(),
        );
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return bad(list.join("; "));
        }
        for (k, s) in self.init.iter().enumerate() {
            if !(s.n >= 0.0 && s.n.is_finite()) {
                return bad(format!("species {} density {} must be >= 0", k + 1, s.n));
            }
            if s.n > 0.0 && s.tensor.is_none() && !(s.temperature > 0.0) {
                return bad(format!("species {} temperature {} must be > 0", k + 1, s.temperature));
            }
        }
        if self.init.iter().all(|s| s.n == 0.0) {
            return bad("both species are empty".into());
        }
        if let Some(sp) = &self.space {
            if sp.cells < 2 {
                return bad(format!("{} cells, at least 2 required", sp.cells));
            }
            if !(sp.length > 0.0) {
                return bad(format!("domain length {} must be positive", sp.length));
            }
            if sp.density_amplitude.abs() >= 1.0 {
                return bad(format!("density amplitude {} must be below 1", sp.density_amplitude));
            }
            if sp.shear_amplitude != 0.0 && self.grid.dim() < 2 {
                return bad("a shear perturbation needs at least two velocity dimensions".into());
            }
            let cfl = super::cfl_number(&self.grid, self.dt, sp.length / sp.cells as f64);
            if cfl > 1.0 {
                return Err(Error::Cfl { cfl });
            }
        }
        Ok(())
    }
}

/// Both species in every cell (one cell for homogeneous runs) at time `t`.
#[derive(Debug, Clone)]
pub struct KineticState {
    pub cells: Vec<[Distribution; 2]>,
    pub t: f64,
    /// Cell width; 1 for homogeneous runs, so totals are per unit volume.
    pub dx: f64,
}

impl KineticState {
    pub fn initial(sc: &Scenario) -> Result<Self> {
        let g = &sc.grid;
        let masses = sc.params.masses();
        let build = |k: usize, n_scale: f64, du: Vec3| -> Result<Distribution> {
            let s = &sc.init[k];
            let n = s.n * n_scale;
            if n == 0.0 {
                return Ok(Distribution::zeros(g));
            }
            let u = truncate(vector::add(s.u, du), g.dim());
            match &s.tensor {
                Some(t) => {
                    let spd = spd_factor(t)?;
                    if sc.matching {
                        Ok(match_gaussian(n, u, &spd, masses[k], g)?.0)
                    } else {
                        gaussian_on_grid(n, u, &spd, masses[k], g)
                    }
                }
                None if sc.matching => match_moments(&TargetMoments { n, u, temperature: s.temperature }, masses[k], g),
                None => maxwellian_on_grid(n, u, s.temperature, masses[k], g),
            }
        };
        match &sc.space {
            None => {
                Ok(Self { cells: vec![[build(0, 1.0, vector::ZERO)?, build(1, 1.0, vector::ZERO)?]], t: 0.0, dx: 1.0 })
            }
            Some(sp) => {
                let dx = sp.length / sp.cells as f64;
                let cells = (0..sp.cells)
                    .into_par_iter()
                    .map(|i| {
                        let phase = 2.0 * PI * (i as f64 + 0.5) * dx / sp.length;
                        let scale = 1.0 + sp.density_amplitude * phase.cos();
                        let du = [0.0, sp.shear_amplitude * phase.sin(), 0.0];
                        Ok([build(0, scale, du)?, build(1, scale, du)?])
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self { cells, t: 0.0, dx })
            }
        }
    }

    /// Cell average of species `k`.
    pub fn mean(&self, k: usize) -> Distribution {
        let mut acc = self.cells[0][k].clone();
        for c in &self.cells[1..] {
            acc.axpy(1.0, &c[k]);
        }
        acc.scaled(1.0 / self.cells.len() as f64)
    }
}

/// One diagnostic sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub step: usize,
    pub t: f64,
    /// Moments of the cell-averaged distribution; `None` for an empty species.
    pub species: [Option<MomentSet>; 2],
    /// Particle number of each species over the domain.
    pub total_mass: [f64; 2],
    /// `sum_k m_k n_k u_k` over the domain.
    pub total_momentum: Vec3,
    /// `sum_k (1/2 m_k n_k |u_k|^2 + d/2 n_k T_k)` over the domain.
    pub total_energy: f64,
    pub h: f64,
    /// `||P_k - n_k T_k I||_F`
    pub anisotropy: [f64; 2],
    /// Some node value is negative.
    pub negative: bool,
    /// Some node value is NaN or infinite; the run stops here.
    pub nonfinite: bool,
}

#[derive(Debug, Clone)]
pub struct Diagnostics {
    pub dim: usize,
    pub masses: [f64; 2],
    pub records: Vec<Record>,
}

impl Diagnostics {
    /// `(t, value(record))` for every record.
    pub fn series(&self, value: impl Fn(&Record) -> f64) -> Vec<(f64, f64)> {
        self.records.iter().map(|r| (r.t, value(r))).collect()
    }

    pub fn last(&self) -> &Record {
        self.records.last().expect("diagnostics always hold the initial record")
    }
}

fn record(state: &KineticState, step: usize, masses: [f64; 2], grid: &VelocityGrid) -> Result<Record> {
    let volume = state.dx * state.cells.len() as f64;
    let nonfinite = state.cells.iter().any(|c| !c[0].is_finite() || !c[1].is_finite());
    let negative = state.cells.iter().any(|c| c[0].min_value() < 0.0 || c[1].min_value() < 0.0);
    let mut species = [None, None];
    let mut total_mass = [0.0; 2];
    let mut total_momentum = vector::ZERO;
    let mut total_energy = 0.0;
    let mut anisotropy = [0.0; 2];
    if !nonfinite {
        for k in 0..2 {
            let mean = state.mean(k);
            match moments(&mean, masses[k], grid) {
                Ok(mo) => {
                    total_mass[k] = volume * mo.n;
                    total_momentum = vector::add(total_momentum, vector::scale(volume, mo.momentum(masses[k])));
                    total_energy += volume * mo.energy(masses[k]);
                    anisotropy[k] = mo.anisotropy();
                    species[k] = Some(mo);
                }
                Err(Error::DegenerateDensity { n, .. }) => total_mass[k] = volume * n,
                Err(e) => return Err(e),
            }
        }
    }
    let h = state.cells.iter().map(|c| state.dx * (h_single(&c[0], grid) + h_single(&c[1], grid))).sum();
    Ok(Record {
        step,
        t: state.t,
        species,
        total_mass,
        total_momentum,
        total_energy,
        h,
        anisotropy,
        negative,
        nonfinite,
    })
}

fn relax_cells(
    model: &RelaxationModel,
    state: &mut KineticState,
    dt: f64,
    integ: Integrator,
    grid: &VelocityGrid,
) -> Result<()> {
    state.cells.par_iter_mut().try_for_each(|c| relax_step(model, c, dt, integ, grid))
}

/// Advances `state` by one step of `sc`.
pub(crate) fn advance(model: &RelaxationModel, sc: &Scenario, state: &mut KineticState) -> Result<()> {
    let (g, dt) = (&sc.grid, sc.dt);
    match &sc.space {
        None => relax_cells(model, state, dt, sc.integrator, g)?,
        Some(sp) => match sp.splitting {
            Splitting::Lie => {
                transport_step(&mut state.cells, g, dt, state.dx)?;
                relax_cells(model, state, dt, sc.integrator, g)?;
            }
            Splitting::Strang => {
                relax_cells(model, state, 0.5 * dt, sc.integrator, g)?;
                transport_step(&mut state.cells, g, dt, state.dx)?;
                relax_cells(model, state, 0.5 * dt, sc.integrator, g)?;
            }
        },
    }
    state.t += dt;
    Ok(())
}

/// Runs `sc`, recording diagnostics at step 0, every `cadence` steps and at
/// the final step. A non-finite state is recorded and ends the run.
pub fn run_scenario(sc: &Scenario) -> Result<Diagnostics> {
    sc.check()?;
    let model = RelaxationModel::new(sc.params.clone(), sc.matching)?;
    let masses = sc.params.masses();
    let mut state = KineticState::initial(sc)?;
    let mut records = vec![record(&state, 0, masses, &sc.grid)?];
    let steps = sc.steps();
    for step in 1..=steps {
        advance(&model, sc, &mut state)?;
        state.t = step as f64 * sc.dt;
        let nonfinite = state.cells.iter().any(|c| !c[0].is_finite() || !c[1].is_finite());
        if step % sc.cadence == 0 || step == steps || nonfinite {
            records.push(record(&state, step, masses, &sc.grid)?);
        }
        if nonfinite {
            break;
        }
    }
    Ok(Diagnostics { dim: sc.grid.dim(), masses, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{EsParams, InteractionSpec, MixingParams, SpeciesSpec};

    fn params() -> ParamBundle {
        ParamBundle {
            species: [SpeciesSpec::new("a", 1.0).unwrap(), SpeciesSpec::new("b", 2.0).unwrap()],
            interaction: InteractionSpec::new(1.0, 0.8, 1.0, 1.0).unwrap(),
            mixing: MixingParams { delta: 0.5, alpha: 0.5, gamma: 0.0 },
            es: EsParams::bgk(),
        }
    }

    fn grid(dim: usize) -> VelocityGrid {
        VelocityGrid::uniform(dim, 24, -8.0, 8.0).unwrap()
    }

    #[test]
    fn record_count() {
        let init = [SpeciesInit::maxwellian(1.0, [0.2, 0.0, 0.0], 1.0), SpeciesInit::maxwellian(0.5, [0.0; 3], 0.8)];
        let sc = Scenario::homogeneous(params(), grid(2), init.clone(), 0.1, 1.0);
        assert_eq!(run_scenario(&sc).unwrap().records.len(), 11);
        let sc = Scenario { cadence: 3, ..sc };
        let steps: Vec<usize> = run_scenario(&sc).unwrap().records.iter().map(|r| r.step).collect();
        assert_eq!(steps, vec![0, 3, 6, 9, 10]);
    }

    #[test]
    fn rejects_invalid_scenarios() {
        let init = [SpeciesInit::maxwellian(1.0, [0.0; 3], 1.0), SpeciesInit::empty()];
        let base = Scenario::homogeneous(params(), grid(1), init, 0.1, 1.0);
        assert!(Scenario { dt: 0.0, ..base.clone() }.check().is_err());
        assert!(Scenario { t_end: 0.01, ..base.clone() }.check().is_err());
        assert!(Scenario { cadence: 0, ..base.clone() }.check().is_err());
        let mut p = params();
        p.mixing.gamma = 10.0;
        assert!(Scenario { params: p, ..base.clone() }.check().is_err());
        let sp = SpaceSpec {
            cells: 8,
            length: 1.0,
            splitting: Splitting::Lie,
            shear_amplitude: 0.0,
            density_amplitude: 0.1,
        };
        assert!(matches!(Scenario { space: Some(sp), ..base.clone() }.check(), Err(Error::Cfl { .. })));
        let sp = SpaceSpec { cells: 8, length: 100.0, shear_amplitude: 0.1, ..sp };
        assert!(Scenario { space: Some(sp), ..base }.check().is_err());
    }

    #[test]
    fn wave_conserves_totals() {
        let init = [SpeciesInit::maxwellian(1.0, [0.0; 3], 1.0), SpeciesInit::maxwellian(0.5, [0.0; 3], 1.0)];
        let sp = SpaceSpec {
            cells: 16,
            length: 16.0,
            splitting: Splitting::Strang,
            shear_amplitude: 0.1,
            density_amplitude: 0.05,
        };
        let sc = Scenario { space: Some(sp), ..Scenario::homogeneous(params(), grid(2), init, 0.1, 1.0) };
        let d = run_scenario(&sc).unwrap();
        let (a, b) = (&d.records[0], d.last());
        for k in 0..2 {
            assert!((a.total_mass[k] - b.total_mass[k]).abs() < 1e-11 * a.total_mass[k]);
        }
        assert!((a.total_energy - b.total_energy).abs() < 1e-10 * a.total_energy);
        assert!(vector::norm(vector::sub(a.total_momentum, b.total_momentum)) < 1e-11);
        assert!(b.anisotropy[0] > 0.0);
    }

    #[test]
    fn single_species_run() {
        let mut t = SymTensor::diagonal(&[1.3, 0.7]);
        t.set_sym(0, 1, 0.1);
        let init = [SpeciesInit { n: 1.0, u: [0.0; 3], temperature: 1.0, tensor: Some(t) }, SpeciesInit::empty()];
        let d = run_scenario(&Scenario::homogeneous(params(), grid(2), init, 0.1, 0.5)).unwrap();
        assert!(d.records.iter().all(|r| r.species[1].is_none() && r.total_mass[1] == 0.0));
        assert!(d.last().anisotropy[0] < d.records[0].anisotropy[0]);
    }
}
