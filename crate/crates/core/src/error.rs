use thiserror::Error;

use crate::linalg::SymTensor;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{name} out of range: {value} (expected {expected})")]
    OutOfRange { name: &'static str, value: f64, expected: String },

    #[error("invalid velocity grid: {0}")]
    InvalidGrid(String),

    #[error("distribution length {got} does not match grid node count {expected}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("degenerate density n = {n:e} below floor {floor:e}")]
    DegenerateDensity { n: f64, floor: f64 },

    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("tensor is not positive definite: pivot {pivot} = {value:e} in {tensor:?}")]
    NotSpd { pivot: usize, value: f64, tensor: SymTensor },

    #[error("moment matching did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("CFL condition violated: {cfl} > 1")]
    Cfl { cfl: f64 },

    #[error("singular expansion prefactor: {what} = {value:e} (A = {a}, c1 = {c1}, c2 = {c2}, n1 = {n1}, n2 = {n2}, m1 = {m1}, m2 = {m2})")]
    SingularPrefactor { what: &'static str, value: f64, a: f64, c1: f64, c2: f64, n1: f64, n2: f64, m1: f64, m2: f64 },

    #[error("decay fit window holds {found} samples, at least {required} needed")]
    InsufficientWindow { found: usize, required: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: f64, expected: impl Into<String>) -> Self {
        Error::OutOfRange { name, value, expected: expected.into() }
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateDensity { .. }
                | Error::NotSpd { .. }
                | Error::NoConvergence { .. }
                | Error::Cfl { .. }
                | Error::SingularPrefactor { .. }
                | Error::InsufficientWindow { .. }
                | Error::NonFinite(_)
        )
    }
}
