//! First-order upwind transport along x on a periodic 1D mesh.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Distribution, VelocityGrid};

/// `max |v_x| dt / dx`
pub fn cfl_number(grid: &VelocityGrid, dt: f64, dx: f64) -> f64 {
    grid.max_abs_vx() * dt / dx
}

/// One upwind step of `df/dt + v_x df/dx = 0` for every velocity node and
/// species. `cells[i]` holds both species in cell `i`.
pub fn transport_step(cells: &mut [[Distribution; 2]], grid: &VelocityGrid, dt: f64, dx: f64) -> Result<()> {
    let cfl = cfl_number(grid, dt, dx);
    if !(cfl <= 1.0) {
        return Err(Error::Cfl { cfl });
    }
    let nc = cells.len();
    if nc < 2 {
        return Ok(());
    }
    let old: Vec<[Distribution; 2]> = cells.to_vec();
    let nodes = grid.nodes();
    cells.par_iter_mut().enumerate().for_each(|(i, cell)| {
        let left = &old[(i + nc - 1) % nc];
        let here = &old[i];
        let right = &old[(i + 1) % nc];
        for s in 0..2 {
            let (l, c, r) = (left[s].values(), here[s].values(), right[s].values());
            for (j, x) in cell[s].values_mut().iter_mut().enumerate() {
                let nu = nodes[j][0] * dt / dx;
                *x = if nu > 0.0 { c[j] - nu * (c[j] - l[j]) } else { c[j] - nu * (r[j] - c[j]) };
            }
        }
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_cells(g: &VelocityGrid, nc: usize, f: impl Fn(usize, usize) -> f64) -> Vec<[Distribution; 2]> {
        (0..nc)
            .map(|i| {
                let d = Distribution::from_values((0..g.len()).map(|j| f(i, j)).collect());
                [d.clone(), d.scaled(0.5)]
            })
            .collect()
    }

    #[test]
    fn uniform_state_unchanged() {
        let g = VelocityGrid::uniform(1, 8, -1.0, 1.0).unwrap();
        let mut cells = uniform_cells(&g, 10, |_, j| 1.0 + j as f64);
        let before = cells.clone();
        transport_step(&mut cells, &g, 0.05, 0.1).unwrap();
        for (a, b) in cells.iter().zip(&before) {
            assert!(a[0].max_abs_diff(&b[0]) < 1e-15);
        }
    }

    #[test]
    fn bump_moves_half_a_cell_at_half_cfl() {
        // vx nodes at +-0.875, ..., choose dt so the fastest node has CFL 0.5
        let g = VelocityGrid::uniform(1, 8, -1.0, 1.0).unwrap();
        let dx = 1.0;
        let dt = 0.5 / g.max_abs_vx();
        let top = g.len() - 1;
        let mut cells = uniform_cells(&g, 6, |i, j| if i == 2 && j == top { 1.0 } else { 0.0 });
        transport_step(&mut cells, &g, dt, dx).unwrap();
        let column: Vec<f64> = cells.iter().map(|c| c[0].values()[top]).collect();
        assert_eq!(column, vec![0.0, 0.0, 0.5, 0.5, 0.0, 0.0]);
        let bottom: Vec<f64> = cells.iter().map(|c| c[0].values()[0]).collect();
        assert!(bottom.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn periodic_mass_conserved() {
        let g = VelocityGrid::uniform(2, 8, -2.0, 2.0).unwrap();
        let nc = 16;
        let mut cells = uniform_cells(&g, nc, |i, j| (1.0 + (i as f64 * 0.7).sin() * 0.5) * (1.0 + (j % 5) as f64));
        let mass =
            |cells: &[[Distribution; 2]]| -> f64 { cells.iter().map(|c| c[0].density(&g) + c[1].density(&g)).sum() };
        let m0 = mass(&cells);
        for _ in 0..20 {
            transport_step(&mut cells, &g, 0.05, 0.1).unwrap();
            assert!((mass(&cells) - m0).abs() < 1e-13 * m0);
        }
    }

    #[test]
    fn cfl_violation_is_error() {
        let g = VelocityGrid::uniform(1, 8, -4.0, 4.0).unwrap();
        let mut cells = uniform_cells(&g, 4, |_, _| 1.0);
        assert!(matches!(transport_step(&mut cells, &g, 0.1, 0.1), Err(Error::Cfl { .. })));
    }
}
