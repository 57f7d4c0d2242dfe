//! Unitary angular-frequency Fourier transforms on uniform lattices.
//!
//! Continuous convention: `f̂(ξ) = (1/√(2π)) ∫ f(x) e^{-iξx} dx` and
//! `f(x) = (1/√(2π)) ∫ f̂(ξ) e^{iξx} dξ`.
//!
//! A discrete FFT assumes the first sample sits at the origin and the
//! first output at frequency zero. Our lattices start at `min` and the dual
//! lattice is centred, `ξ_j = (j - c)·dξ` with `c = n/2`. Writing
//! `x_k = min + k·dx` and using `dx·dξ = 2π/n`,
//!
//! ```text
//! e^{-iξ_j x_k} = e^{-iξ_j·min} · e^{-2πi jk/n} · e^{+2πi ck/n}
//! ```
//!
//! so the forward transform is: multiply sample `k` by `e^{2πi ck/n}`, run
//! the FFT, multiply output `j` by `e^{-iξ_j·min}·dx/√(2π)`. The inverse
//! undoes both phase factors in reverse order with weight `dξ/√(2π)`; since
//! `dx·dξ·n/(2π) = 1` the pair is an exact inverse.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{Grid1D, Grid2D, SampledFunction1D, SampledFunction2D};
use super::{edge_ratio, NICE_EDGE_RATIO};
use crate::error::{Error, Result};

/// Precomputed transform between a lattice and its dual.
#[derive(Clone)]
pub struct Fourier1D {
    grid: Grid1D,
    dual: Grid1D,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    // e^{2πi ck/n}
    origin_twist: Vec<Complex64>,
    // e^{-iξ_j min}
    dual_phase: Vec<Complex64>,
    forward_weight: f64,
    inverse_weight: f64,
}

impl std::fmt::Debug for Fourier1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier1D").field("grid", &self.grid).field("dual", &self.dual).finish()
    }
}

impl Fourier1D {
    pub fn new(grid: Grid1D) -> Self {
        let n = grid.n;
        let dual = grid.dual();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);
        let c = grid.origin_index() as f64;
        let origin_twist = (0..n).map(|k| Complex64::cis(2.0 * PI * c * k as f64 / n as f64)).collect();
        let dual_phase = dual.points().map(|xi| Complex64::cis(-xi * grid.min)).collect();
        let forward_weight = grid.dx() / (2.0 * PI).sqrt();
        let inverse_weight = dual.dx() / (2.0 * PI).sqrt();
        Self { grid, dual, fft, ifft, origin_twist, dual_phase, forward_weight, inverse_weight }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn dual(&self) -> &Grid1D {
        &self.dual
    }

    /// Samples on `grid` → samples of `f̂` on `dual`.
    pub fn forward_in_place(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.grid.n);
        for (v, t) in data.iter_mut().zip(&self.origin_twist) {
            *v *= t;
        }
        self.fft.process(data);
        for (v, t) in data.iter_mut().zip(&self.dual_phase) {
            *v *= t * self.forward_weight;
        }
    }

    /// Samples on `dual` → samples on `grid`.
    pub fn inverse_in_place(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.grid.n);
        for (v, t) in data.iter_mut().zip(&self.dual_phase) {
            *v *= t.conj();
        }
        self.ifft.process(data);
        for (v, t) in data.iter_mut().zip(&self.origin_twist) {
            *v *= t.conj() * self.inverse_weight;
        }
    }
}

/// Tensor product of two [`Fourier1D`] plans; overall factor `1/(2π)`.
#[derive(Clone, Debug)]
pub struct Fourier2D {
    along_x: Fourier1D,
    along_p: Fourier1D,
}

impl Fourier2D {
    pub fn new(grid: Grid2D) -> Self {
        Self { along_x: Fourier1D::new(grid.gx), along_p: Fourier1D::new(grid.gp) }
    }

    pub fn grid(&self) -> Grid2D {
        Grid2D::new(*self.along_x.grid(), *self.along_p.grid())
    }

    pub fn dual(&self) -> Grid2D {
        Grid2D::new(*self.along_x.dual(), *self.along_p.dual())
    }

    pub fn forward_in_place(&self, data: &mut Array2<Complex64>) {
        self.apply(data, |plan, buf| plan.forward_in_place(buf));
    }

    pub fn inverse_in_place(&self, data: &mut Array2<Complex64>) {
        self.apply(data, |plan, buf| plan.inverse_in_place(buf));
    }

    fn apply(&self, data: &mut Array2<Complex64>, op: impl Fn(&Fourier1D, &mut [Complex64])) {
        let (nx, np) = data.dim();
        let mut buf = vec![Complex64::new(0.0, 0.0); np.max(nx)];
        for mut row in data.rows_mut() {
            let b = &mut buf[..np];
            for (d, s) in b.iter_mut().zip(row.iter()) {
                *d = *s;
            }
            op(&self.along_p, b);
            for (d, s) in row.iter_mut().zip(b.iter()) {
                *d = *s;
            }
        }
        for mut col in data.columns_mut() {
            let b = &mut buf[..nx];
            for (d, s) in b.iter_mut().zip(col.iter()) {
                *d = *s;
            }
            op(&self.along_x, b);
            for (d, s) in col.iter_mut().zip(b.iter()) {
                *d = *s;
            }
        }
    }
}

fn reject_non_finite(values: impl IntoIterator<Item = Complex64>) -> Result<()> {
    if values.into_iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Fourier transform input"));
    }
    Ok(())
}

fn warn_if_not_nice(values: &[Complex64], what: &str) {
    if cfg!(debug_assertions) {
        let r = edge_ratio(values, |v| v.norm());
        if r > NICE_EDGE_RATIO {
            log::warn!("{what}: input does not decay at the grid edge (ratio {r:.2e})");
        }
    }
}

/// `f̂` on the dual of `f.grid`.
pub fn fourier_forward_1d(f: &SampledFunction1D) -> Result<SampledFunction1D> {
    reject_non_finite(f.values.iter().copied())?;
    warn_if_not_nice(&f.values, "fourier_forward_1d");
    let plan = Fourier1D::new(f.grid);
    let mut values = f.values.clone();
    plan.forward_in_place(&mut values);
    Ok(SampledFunction1D { grid: *plan.dual(), values })
}

/// Inverse of [`fourier_forward_1d`]: `g` must live on `target.dual()`.
pub fn fourier_inverse_1d(g: &SampledFunction1D, target: &Grid1D) -> Result<SampledFunction1D> {
    if !g.grid.approx_eq(&target.dual()) {
        return Err(Error::GridMismatch("input is not sampled on the dual of the target grid".into()));
    }
    reject_non_finite(g.values.iter().copied())?;
    warn_if_not_nice(&g.values, "fourier_inverse_1d");
    let plan = Fourier1D::new(*target);
    let mut values = g.values.clone();
    plan.inverse_in_place(&mut values);
    Ok(SampledFunction1D { grid: *target, values })
}

pub fn fourier_forward_2d(f: &SampledFunction2D) -> Result<SampledFunction2D> {
    reject_non_finite(f.values.iter().copied())?;
    let plan = Fourier2D::new(f.grid);
    let mut values = f.values.clone();
    plan.forward_in_place(&mut values);
    Ok(SampledFunction2D { grid: plan.dual(), values })
}

pub fn fourier_inverse_2d(g: &SampledFunction2D, target: &Grid2D) -> Result<SampledFunction2D> {
    if !g.grid.approx_eq(&target.dual()) {
        return Err(Error::GridMismatch("input is not sampled on the dual of the target grid".into()));
    }
    reject_non_finite(g.values.iter().copied())?;
    let plan = Fourier2D::new(*target);
    let mut values = g.values.clone();
    plan.inverse_in_place(&mut values);
    Ok(SampledFunction2D { grid: *target, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn default_grid() -> Grid1D {
        Grid1D::centered(16.0, 512).unwrap()
    }

    #[test]
    fn gaussian_maps_to_itself() {
        let f = SampledFunction1D::from_real_fn(default_grid(), |x| (-x * x / 2.0).exp());
        let g = fourier_forward_1d(&f).unwrap();
        let err =
            g.grid.points().zip(&g.values).map(|(xi, v)| (v - c((-xi * xi / 2.0).exp())).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "max error {err:e}");
    }

    #[test]
    fn zero_maps_to_zero() {
        let f = SampledFunction1D::zeros(default_grid());
        assert!(fourier_forward_1d(&f).unwrap().values.iter().all(|v| v.norm() == 0.0));
        let g = SampledFunction1D::zeros(default_grid().dual());
        assert!(fourier_inverse_1d(&g, &default_grid()).unwrap().values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn shifted_gaussian_against_direct_quadrature() {
        let grid = default_grid();
        let f = SampledFunction1D::from_real_fn(grid, |x| (-(x - 2.0).powi(2) / 2.0).exp());
        let g = fourier_forward_1d(&f).unwrap();
        // oracle: brute-force quadrature at a handful of frequencies
        for j in [200usize, 250, 256, 263, 300] {
            let xi = g.grid.point(j);
            let direct = quadrature(&f.map(|x, v| v * Complex64::cis(-xi * x))) / (2.0 * PI).sqrt();
            assert!((g.values[j] - direct).norm() < 1e-12);
            assert!((g.values[j].norm() - (-xi * xi / 2.0).exp()).abs() < 1e-10);
            if g.values[j].norm() > 1e-3 {
                let dphase = (g.values[j].arg() + 2.0 * xi).rem_euclid(2.0 * PI);
                assert!(dphase < 1e-9 || 2.0 * PI - dphase < 1e-9, "phase off by {dphase}");
            }
        }
    }

    #[test]
    fn inverse_of_gaussian_and_round_trip() {
        let grid = default_grid();
        let g = SampledFunction1D::from_real_fn(grid.dual(), |xi| (-xi * xi / 2.0).exp());
        let f = fourier_inverse_1d(&g, &grid).unwrap();
        let err = f.grid.points().zip(&f.values).map(|(x, v)| (v - c((-x * x / 2.0).exp())).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10);

        let h = SampledFunction1D::from_fn(grid, |x| Complex64::new((-x * x).exp(), x * (-x * x / 3.0).exp()));
        let back = fourier_inverse_1d(&fourier_forward_1d(&h).unwrap(), &grid).unwrap();
        assert!(back.max_abs_diff(&h).unwrap() < 1e-12);
    }

    #[test]
    fn off_center_and_odd_grids_round_trip() {
        for grid in [Grid1D::new(-7.0, 9.0, 300).unwrap(), Grid1D::new(-8.0, 7.0, 243).unwrap()] {
            let h = SampledFunction1D::from_real_fn(grid, |x| (-(x - 1.0).powi(2)).exp());
            let fwd = fourier_forward_1d(&h).unwrap();
            // still the continuous transform: |ĥ(ξ)| = e^{-ξ²/4}/√2
            for (xi, v) in fwd.grid.points().zip(&fwd.values) {
                assert!((v.norm() - (-xi * xi / 4.0).exp() / 2f64.sqrt()).abs() < 1e-10);
            }
            let back = fourier_inverse_1d(&fwd, &grid).unwrap();
            assert!(back.max_abs_diff(&h).unwrap() < 1e-12);
        }
    }

    #[test]
    fn rejects_nan_and_wrong_grid() {
        let mut f = SampledFunction1D::zeros(default_grid());
        f.values[3] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(fourier_forward_1d(&f), Err(Error::NonFinite(_))));
        let g = SampledFunction1D::zeros(default_grid());
        assert!(matches!(fourier_inverse_1d(&g, &default_grid()), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn two_dimensional_gaussian_and_round_trip() {
        let grid = Grid2D::new(Grid1D::centered(10.0, 128).unwrap(), Grid1D::new(-9.0, 11.0, 96).unwrap());
        let f = SampledFunction2D::from_fn(grid, |x, p| c((-(x * x + p * p) / 2.0).exp()));
        let fh = fourier_forward_2d(&f).unwrap();
        let oracle = SampledFunction2D::from_fn(fh.grid, |a, b| c((-(a * a + b * b) / 2.0).exp()));
        assert!(fh.max_abs_diff(&oracle).unwrap() < 1e-10);
        let back = fourier_inverse_2d(&fh, &grid).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);

        let zero = SampledFunction2D::from_fn(grid, |x, _| c((-x * x / 2.0).exp() * 0.0));
        assert_eq!(fourier_forward_2d(&zero).unwrap().max_abs(), 0.0);
    }
}
