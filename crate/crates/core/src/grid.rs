//! Uniform Cartesian velocity lattice with midpoint quadrature.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::vector::Vec3;

/// Nodes per reduction chunk. Fixed so that partial sums, and therefore every
/// quadrature result, do not depend on the number of worker threads.
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / self.count as f64
    }

    /// Midpoint of cell `i`.
    pub fn node(&self, i: usize) -> f64 {
        self.min + (i as f64 + 0.5) * self.spacing()
    }
}

#[derive(Debug, Clone)]
pub struct VelocityGrid {
    dim: usize,
    axes: Vec<Axis>,
    weight: f64,
    nodes: Vec<Vec3>,
}

impl VelocityGrid {
    /// Same bounds and point count on every axis.
    pub fn uniform(dim: usize, points: usize, vmin: f64, vmax: f64) -> Result<Self> {
        Self::new(vec![Axis { min: vmin, max: vmax, count: points }; dim])
    }

    /// The reference lattice: 32 points per axis on `[-8, 8]`.
    pub fn reference(dim: usize) -> Self {
        Self::uniform(dim, 32, -8.0, 8.0).expect("reference grid is valid")
    }

    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        let dim = axes.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        for (k, a) in axes.iter().enumerate() {
            if !(a.min < a.max) || !a.min.is_finite() || !a.max.is_finite() {
                return Err(Error::InvalidGrid(format!("axis {k}: need vmin < vmax, got [{}, {}]", a.min, a.max)));
            }
            if a.count < 8 {
                return Err(Error::InvalidGrid(format!("axis {k}: {} points, at least 8 required", a.count)));
            }
        }
        let len: usize = axes.iter().map(|a| a.count).product();
        let weight = axes.iter().map(Axis::spacing).product();
        let counts = [axes[0].count, axes.get(1).map_or(1, |a| a.count), axes.get(2).map_or(1, |a| a.count)];
        let mut nodes = Vec::with_capacity(len);
        for i in 0..counts[0] {
            for j in 0..counts[1] {
                for k in 0..counts[2] {
                    let mut v = [0.0; 3];
                    v[0] = axes[0].node(i);
                    if dim > 1 {
                        v[1] = axes[1].node(j);
                    }
                    if dim > 2 {
                        v[2] = axes[2].node(k);
                    }
                    nodes.push(v);
                }
            }
        }
        Ok(Self { dim, axes, weight, nodes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    /// Quadrature weight `prod dv` shared by every node.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Vec3 {
        self.nodes[i]
    }

    /// Largest `|v_0|` over the nodes (the transport direction of 1D runs).
    pub fn max_abs_vx(&self) -> f64 {
        let a = &self.axes[0];
        a.node(0).abs().max(a.node(a.count - 1).abs())
    }

    /// Sums `term(i, v_i)` over all nodes (without the quadrature weight).
    ///
    /// Partial sums are formed per fixed-size chunk in parallel and combined
    /// in chunk order, so the result is reproducible bit for bit.
    pub fn sum<const K: usize, F>(&self, term: F) -> [f64; K]
    where
        F: Fn(usize, &Vec3) -> [f64; K] + Sync,
    {
        let partials: Vec<[f64; K]> = self
            .nodes
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(c, chunk)| {
                let base = c * CHUNK;
                let mut acc = [0.0; K];
                for (j, v) in chunk.iter().enumerate() {
                    let t = term(base + j, v);
                    for (a, x) in acc.iter_mut().zip(t) {
                        *a += x;
                    }
                }
                acc
            })
            .collect();
        let mut total = [0.0; K];
        for p in partials {
            for (a, x) in total.iter_mut().zip(p) {
                *a += x;
            }
        }
        total
    }

    /// Weighted quadrature `sum_i w term(i, v_i)`.
    pub fn integrate<const K: usize, F>(&self, term: F) -> [f64; K]
    where
        F: Fn(usize, &Vec3) -> [f64; K] + Sync,
    {
        let mut s = self.sum(term);
        for x in &mut s {
            *x *= self.weight;
        }
        s
    }

    /// Fills a fresh array with `value(v_i)`.
    pub fn tabulate<F>(&self, value: F) -> Vec<f64>
    where
        F: Fn(&Vec3) -> f64 + Sync,
    {
        #[allow(clippy::redundant_closure)] // the closure is Send where F alone need not be
        self.nodes.par_iter().map(|v| value(v)).collect()
    }
}

/// Values of one species' distribution function at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    values: Vec<f64>,
}

impl Distribution {
    pub fn zeros(grid: &VelocityGrid) -> Self {
        Self { values: vec![0.0; grid.len()] }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    /// Wraps `values`, checking the length against `grid`.
    pub fn on_grid(grid: &VelocityGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: values.len() });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&x| x >= 0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|x| x.is_finite())
    }

    /// Quadrature mass `sum w f`.
    pub fn density(&self, grid: &VelocityGrid) -> f64 {
        let [n] = grid.integrate(|i, _| [self.values[i]]);
        n
    }

    /// Largest nodewise absolute difference.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &Distribution) {
        self.values.par_iter_mut().zip(other.values.par_iter()).for_each(|(a, b)| *a += s * b);
    }

    pub fn scaled(&self, s: f64) -> Distribution {
        Distribution { values: self.values.iter().map(|x| s * x).collect() }
    }
}
