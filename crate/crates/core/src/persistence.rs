//! Persistence of velocity for hard-sphere collisions.
//!
//! `kappa = c1 / c2` is the ratio of the incoming speed to the speed of the
//! collision partner; the ratio returned is the mean post-collision velocity
//! component along the incoming direction, relative to `c1`.

use crate::error::{Error, Result};

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::out_of_range("kappa", kappa, "> 0"));
    }
    Ok(())
}

fn check_masses(m1: f64, m2: f64) -> Result<()> {
    for (name, m) in [("m1", m1), ("m2", m2)] {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::out_of_range(name, m, "> 0"));
        }
    }
    Ok(())
}

/// Equal masses. At `kappa = 1` the `kappa < 1` branch is used; both give 2/5.
pub fn persistence_equal_mass(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    let k2 = kappa * kappa;
    Ok(if kappa > 1.0 {
        (15.0 * k2 * k2 + 1.0) / (10.0 * k2 * (3.0 * k2 + 1.0))
    } else {
        (3.0 * k2 + 5.0) / (5.0 * (k2 + 3.0))
    })
}

/// `(m1 - m2)/(m1 + m2) + 2 m2/(m1 + m2) * persistence_equal_mass(kappa)`
pub fn persistence_unequal_mass(kappa: f64, m1: f64, m2: f64) -> Result<f64> {
    check_masses(m1, m2)?;
    let eq = persistence_equal_mass(kappa)?;
    let s = m1 + m2;
    Ok((m1 - m2) / s + 2.0 * m2 / s * eq)
}

/// `(m1 - m2/2)/(m1 + m2)`
pub fn persistence_lower_bound(m1: f64, m2: f64) -> Result<f64> {
    check_masses(m1, m2)?;
    Ok((m1 - 0.5 * m2) / (m1 + m2))
}

/// `count` points spaced logarithmically over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let steps = (count.max(2) - 1) as f64;
    (0..count).map(|i| (a + (b - a) * i as f64 / steps).exp()).collect()
}
