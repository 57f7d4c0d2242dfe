use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform lattice `min + k·dx`, `k = 0..n`, with `dx = (max - min)/n`.
///
/// The lattice is half-open: `max` itself is not a sample point. Its dual
/// (frequency) lattice has spacing `2π/(n·dx)` and is centred on zero, with
/// index `n/2` (integer division) at frequency zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::NonFinite("grid bounds"));
        }
        if min >= max {
            return Err(Error::InvalidGrid(format!("min {min} must be below max {max}")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n}")));
        }
        Ok(Self { min, max, n })
    }

    /// `[-half, half)` with `n` points.
    pub fn centered(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, n)
    }

    /// Lattice with the given spacing whose zero-frequency index sits at
    /// `center`, i.e. `point(n/2) == center`.
    pub fn around(center: f64, dx: f64, n: usize) -> Result<Self> {
        let min = center - (n / 2) as f64 * dx;
        Self::new(min, min + n as f64 * dx, n)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.max - self.min) / self.n as f64
    }

    #[inline]
    pub fn point(&self, k: usize) -> f64 {
        self.min + k as f64 * self.dx()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        let dx = self.dx();
        (0..self.n).map(move |k| self.min + k as f64 * dx)
    }

    /// Fractional lattice index of `x`.
    #[inline]
    pub fn index_of(&self, x: f64) -> f64 {
        (x - self.min) / self.dx()
    }

    /// Index of the zero-frequency sample on the dual lattice.
    #[inline]
    pub fn origin_index(&self) -> usize {
        self.n / 2
    }

    pub fn dual(&self) -> Grid1D {
        let dxi = 2.0 * PI / (self.n as f64 * self.dx());
        let min = -(self.origin_index() as f64) * dxi;
        Grid1D { min, max: min + self.n as f64 * dxi, n: self.n }
    }

    /// Same lattice up to relative rounding in the bounds.
    pub fn approx_eq(&self, other: &Grid1D) -> bool {
        let scale = self.dx().abs().max(f64::MIN_POSITIVE);
        self.n == other.n
            && (self.min - other.min).abs() <= 1e-9 * scale
            && (self.max - other.max).abs() <= 1e-9 * scale
    }
}

/// Tensor-product lattice over `(x, p)` (or `(α, β)` on the dual side).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub gx: Grid1D,
    pub gp: Grid1D,
}

impl Grid2D {
    pub fn new(gx: Grid1D, gp: Grid1D) -> Self {
        Self { gx, gp }
    }

    /// Square grid `[-half, half)²` with `n` points per axis.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        let g = Grid1D::centered(half, n)?;
        Ok(Self { gx: g, gp: g })
    }

    pub fn dual(&self) -> Grid2D {
        Grid2D { gx: self.gx.dual(), gp: self.gp.dual() }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.gx.n, self.gp.n)
    }

    pub fn cell_area(&self) -> f64 {
        self.gx.dx() * self.gp.dx()
    }

    pub fn approx_eq(&self, other: &Grid2D) -> bool {
        self.gx.approx_eq(&other.gx) && self.gp.approx_eq(&other.gp)
    }
}

/// Complex samples aligned with a [`Grid1D`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction1D {
    pub grid: Grid1D,
    pub values: Vec<Complex64>,
}

impl SampledFunction1D {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::GridMismatch(format!("{} values for a grid of {} points", values.len(), grid.n)));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sampled function"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.n] }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self.grid.points().zip(&self.values).map(|(x, &v)| f(x, v)).collect();
        Self { grid: self.grid, values }
    }

    /// Largest pointwise distance to `other`; grids must match.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if !self.grid.approx_eq(&other.grid) {
            return Err(Error::GridMismatch("max_abs_diff".into()));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// Complex samples on a [`Grid2D`], indexed `[ix, ip]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction2D {
    pub grid: Grid2D,
    pub values: Array2<Complex64>,
}

impl SampledFunction2D {
    pub fn new(grid: Grid2D, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(Error::GridMismatch(format!(
                "array {:?} for a grid of shape {:?}",
                values.dim(),
                grid.shape()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sampled function"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let xs: Vec<f64> = grid.gx.points().collect();
        let ps: Vec<f64> = grid.gp.points().collect();
        let values = Array2::from_shape_fn(grid.shape(), |(i, j)| f(xs[i], ps[j]));
        Self { grid, values }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if !self.grid.approx_eq(&other.grid) {
            return Err(Error::GridMismatch("max_abs_diff".into()));
        }
        Ok(self.values.iter().zip(other.values.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}
