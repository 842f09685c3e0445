//! Symmetric tensors of order ≤ 3 and their Cholesky factors.

use crate::error::{Error, Result};
use crate::vector::Vec3;

/// Symmetric `dim x dim` matrix stored in the leading block of a 3x3 array;
/// the remaining entries stay zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTensor {
    dim: usize,
    m: [[f64; 3]; 3],
}

impl SymTensor {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=3).contains(&dim), "tensor dimension {dim} not in 1..=3");
        Self { dim, m: [[0.0; 3]; 3] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, 1.0)
    }

    pub fn scalar(dim: usize, s: f64) -> Self {
        let mut t = Self::zeros(dim);
        for i in 0..dim {
            t.m[i][i] = s;
        }
        t
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut t = Self::zeros(values.len());
        for (i, &x) in values.iter().enumerate() {
            t.m[i][i] = x;
        }
        t
    }

    /// Builds from a full row-major matrix; entries past `dim` are ignored.
    /// The matrix is not symmetrized, see [`SymTensor::asymmetry`].
    pub fn from_rows(dim: usize, rows: [[f64; 3]; 3]) -> Self {
        let mut t = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                t.m[i][j] = rows[i][j];
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn set_sym(&mut self, i: usize, j: usize, x: f64) {
        self.m[i][j] = x;
        self.m[j][i] = x;
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.m[i][i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut t = *self;
        for row in &mut t.m {
            for x in row {
                *x *= s;
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut t = *self;
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] += other.m[i][j];
            }
        }
        t
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        self.add(&Self::scalar(self.dim, s))
    }

    /// Deviatoric part `M - tr(M)/d I`.
    pub fn traceless(&self) -> Self {
        self.add_scalar(-self.trace() / self.dim as f64)
    }

    pub fn frobenius(&self) -> f64 {
        self.m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0, |a, x| a.max(x.abs()))
    }

    /// Largest `|M_ij - M_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut a: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..i {
                a = a.max((self.m[i][j] - self.m[j][i]).abs());
            }
        }
        a
    }

    /// Upper-triangle entries in row order (xx, xy, xz, yy, yz, zz for d = 3).
    pub fn upper_triangle(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim * (self.dim + 1) / 2);
        for i in 0..self.dim {
            for j in i..self.dim {
                out.push(self.m[i][j]);
            }
        }
        out
    }

    pub fn mul_vec(&self, x: Vec3) -> Vec3 {
        let mut y = [0.0; 3];
        for i in 0..self.dim {
            for j in 0..self.dim {
                y[i] += self.m[i][j] * x[j];
            }
        }
        y
    }
}

/// Symmetric positive definite tensor together with its lower Cholesky factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpdTensor {
    tensor: SymTensor,
    lower: [[f64; 3]; 3],
}

/// Relative asymmetry tolerated by [`spd_factor`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Cholesky factorization; succeeds exactly when `m` is positive definite.
pub fn spd_factor(m: &SymTensor) -> Result<SpdTensor> {
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let asym = m.asymmetry();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let d = m.dim;
    let mut l = [[0.0; 3]; 3];
    for j in 0..d {
        let mut diag = m.m[j][j];
        for k in 0..j {
            diag -= l[j][k] * l[j][k];
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return Err(Error::NotSpd { pivot: j, value: diag, tensor: *m });
        }
        let ljj = diag.sqrt();
        l[j][j] = ljj;
        for i in j + 1..d {
            // lower triangle read so a slightly asymmetric input factors consistently
            let mut s = m.m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / ljj;
        }
    }
    Ok(SpdTensor { tensor: *m, lower: l })
}

impl SpdTensor {
    pub fn tensor(&self) -> &SymTensor {
        &self.tensor
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim
    }

    pub fn lower(&self) -> [[f64; 3]; 3] {
        self.lower
    }

    /// Solves `L y = x` by forward substitution.
    pub fn forward(&self, x: Vec3) -> Vec3 {
        let l = &self.lower;
        let mut y = [0.0; 3];
        for i in 0..self.tensor.dim {
            let mut s = x[i];
            for k in 0..i {
                s -= l[i][k] * y[k];
            }
            y[i] = s / l[i][i];
        }
        y
    }

    /// Solves `L^T z = y` by back substitution.
    pub fn backward(&self, y: Vec3) -> Vec3 {
        let l = &self.lower;
        let d = self.tensor.dim;
        let mut z = [0.0; 3];
        for i in (0..d).rev() {
            let mut s = y[i];
            for k in i + 1..d {
                s -= l[k][i] * z[k];
            }
            z[i] = s / l[i][i];
        }
        z
    }

    /// `x . M^{-1} x`, from the factor only.
    pub fn inv_quad(&self, x: Vec3) -> f64 {
        let y = self.forward(x);
        y[0] * y[0] + y[1] * y[1] + y[2] * y[2]
    }

    /// `M^{-1} x`, from the factor only.
    pub fn solve(&self, x: Vec3) -> Vec3 {
        self.backward(self.forward(x))
    }

    /// `ln det M = 2 sum ln L_ii`.
    pub fn ln_det(&self) -> f64 {
        (0..self.tensor.dim).map(|i| self.lower[i][i].ln()).sum::<f64>() * 2.0
    }
}

/// Dense Gaussian elimination with partial pivoting for the small Newton
/// systems of moment matching. Returns `None` for a singular matrix.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col] == 0.0 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[i][k] * x[k];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}
