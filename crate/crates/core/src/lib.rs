//! Discrete-velocity simulation and analytic toolkit for the two-species
//! BGK / ES-BGK gas-mixture relaxation model.
//!
//! The crate is organized bottom-up:
//!
//! * [`params`]: model parameters, derived frequencies, admissibility checks.
//! * [`grid`], [`moments`], [`gaussian`], [`linalg`]: velocity lattice,
//!   quadrature moments, discrete Maxwellians/Gaussians with exact moment
//!   matching, SPD factorization, entropy functional.
//! * [`targets`]: mixture velocities/temperatures, ellipsoidal tensors and the
//!   four relaxation targets of each model variant.
//! * [`solver`]: space-homogeneous relaxation (RK4 and a positivity
//!   preserving exponential step), 1D upwind transport, scenarios and
//!   diagnostics.
//! * [`chapman`]: closed-form Chapman-Enskog quantities, relaxation rates and
//!   decay-rate fitting.
//! * [`persistence`]: persistence-of-velocity ratios for hard spheres.

pub mod chapman;
pub mod error;
pub mod gaussian;
pub mod grid;
pub mod linalg;
pub mod moments;
pub mod params;
pub mod persistence;
pub mod solver;
pub mod targets;
pub mod vector;

pub use error::{Error, Result};
pub use gaussian::{gaussian_on_grid, match_gaussian, match_moments, maxwellian_on_grid, TargetMoments};
pub use grid::{Axis, Distribution, VelocityGrid};
pub use linalg::{spd_factor, SpdTensor, SymTensor};
pub use moments::{h_functional, moments, MomentSet};
pub use params::{
    derive_frequencies, validate, EsParams, Frequencies, InteractionSpec, MixingParams, ParamBundle, SpeciesSpec,
    Variant, Violation,
};
pub use vector::Vec3;
