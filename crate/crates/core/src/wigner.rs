//! Wigner quasi-distribution, quantum characteristic function and
//! negativity.
//!
//! The characteristic function is evaluated through the split form
//!
//! ```text
//! ⟨ψ| e^{−i(αX+βP)} |ψ⟩ = e^{iαβħ/2} ∫ ψ*(y) e^{−iαy} ψ(y − βħ) dy,
//! ```
//!
//! which holds exactly because `[X, P] = iħ` is central. Its two-dimensional
//! transform, `f̂(α, β) = (1/2π)·⟨e^{−i(αX+βP)}⟩`, inverts to the Wigner
//! function
//!
//! ```text
//! f(x, p) = (1/2π) ∫ ψ*(x + βħ/2) ψ(x − βħ/2) e^{iβp} dβ.
//! ```

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{quadrature, Fourier1D, Fourier2D, Grid2D, SampledFunction1D, SampledFunction2D};
use crate::states::{Representation, WaveFunction};

/// Largest tolerated imaginary part left over after an inverse transform.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;
/// Edge/peak ratio above which an integrand counts as not decayed.
pub const DECAY_TOL: f64 = 1e-8;

/// Real phase-space function `f(x, p)`, values indexed `[ix, ip]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiDistribution {
    pub grid: Grid2D,
    pub values: Array2<f64>,
    pub hbar: f64,
}

/// Summary of the invariants a Wigner function must satisfy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantReport {
    pub integral: f64,
    /// `max |f| − 1/(πħ)`; nonpositive when the bound holds.
    pub bound_excess: f64,
    pub negative_volume: f64,
}

impl QuasiDistribution {
    pub fn new(grid: Grid2D, values: Array2<f64>, hbar: f64) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(Error::GridMismatch(format!("array {:?} vs grid {:?}", values.dim(), grid.shape())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("quasi-distribution"));
        }
        Ok(Self { grid, values, hbar })
    }

    pub fn from_fn(grid: Grid2D, hbar: f64, f: impl Fn(f64, f64) -> f64) -> Self {
        let xs: Vec<f64> = grid.gx.points().collect();
        let ps: Vec<f64> = grid.gp.points().collect();
        let values = Array2::from_shape_fn(grid.shape(), |(i, j)| f(xs[i], ps[j]));
        Self { grid, values, hbar }
    }

    pub fn integral(&self) -> f64 {
        crate::numerics::quadrature_2d(&self.values, &self.grid)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Value at a lattice point nearest to `(x, p)`.
    pub fn nearest(&self, x: f64, p: f64) -> f64 {
        let i = self.grid.gx.index_of(x).round().clamp(0.0, (self.grid.gx.n - 1) as f64) as usize;
        let j = self.grid.gp.index_of(p).round().clamp(0.0, (self.grid.gp.n - 1) as f64) as usize;
        self.values[[i, j]]
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self.values.iter().zip(other.values.iter()).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// `(∬ |f − g|² dx dp)^{1/2}`.
    pub fn l2_distance(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        let s: f64 = self.values.iter().zip(other.values.iter()).map(|(a, b)| (a - b).powi(2)).sum();
        Ok((s * self.grid.cell_area()).sqrt())
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid.approx_eq(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch("quasi-distributions on different grids".into()))
        }
    }

    pub fn invariants(&self) -> InvariantReport {
        InvariantReport {
            integral: self.integral(),
            bound_excess: self.max_abs() - 1.0 / (PI * self.hbar),
            negative_volume: self.negative_volume(),
        }
    }

    /// Sampled two-dimensional transform `f̂` on the dual grid.
    pub fn transform(&self) -> SampledFunction2D {
        let plan = Fourier2D::new(self.grid);
        let mut data = self.values.mapv(|v| Complex64::new(v, 0.0));
        plan.forward_in_place(&mut data);
        SampledFunction2D { grid: plan.dual(), values: data }
    }

    /// `f̂(α, β) = (1/2π) Σ f(x, p) e^{−i(αx+βp)} dx dp` at an arbitrary
    /// frequency. On the dual lattice this equals [`Self::transform`]; off
    /// it, it is the exact trigonometric interpolant of the lattice values.
    pub fn fourier_at(&self, alpha: f64, beta: f64) -> Complex64 {
        let ex: Vec<Complex64> = self.grid.gx.points().map(|x| Complex64::cis(-alpha * x)).collect();
        let ep: Vec<Complex64> = self.grid.gp.points().map(|p| Complex64::cis(-beta * p)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (row, e) in self.values.rows().into_iter().zip(&ex) {
            let inner: Complex64 = row.iter().zip(&ep).map(|(v, w)| w * *v).sum();
            acc += e * inner;
        }
        acc * self.grid.cell_area() / (2.0 * PI)
    }
}

/// Samples of `f̂(α, β)` on the dual of `phase_grid`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicFunction {
    pub grid: Grid2D,
    pub phase_grid: Grid2D,
    pub values: Array2<Complex64>,
    pub hbar: f64,
}

impl CharacteristicFunction {
    /// Value at `α = β = 0`; equals `1/(2π)` for a unit-norm state.
    pub fn at_origin(&self) -> Complex64 {
        self.values[[self.grid.gx.origin_index(), self.grid.gp.origin_index()]]
    }
}

/// `⟨ψ| e^{−i(αX+βP)} |ψ⟩`.
pub fn characteristic_function(psi: &WaveFunction, alpha: f64, beta: f64) -> Result<Complex64> {
    let grid = psi.support_grid();
    let hbar = psi.hbar();
    if let Representation::Sampled(_) = psi.representation() {
        if (beta * hbar).abs() >= grid.max - grid.min {
            return Err(Error::Precondition(format!(
                "shift βħ = {} moves the state off its grid of width {}",
                beta * hbar,
                grid.max - grid.min
            )));
        }
    }
    let integrand = SampledFunction1D::from_fn(grid, |y| {
        psi.eval(y).conj() * Complex64::cis(-alpha * y) * psi.eval(y - beta * hbar)
    });
    Ok(Complex64::cis(alpha * beta * hbar / 2.0) * quadrature(&integrand))
}

/// `f̂(α, β)` on the whole dual of `phase_grid`, one FFT along `y` per `β`.
///
/// The `y` integral uses the lattice `phase_grid.gx`, so that grid must
/// contain the state.
pub fn characteristic_grid(psi: &WaveFunction, phase_grid: &Grid2D) -> Result<CharacteristicFunction> {
    let hbar = psi.hbar();
    let plan = Fourier1D::new(phase_grid.gx);
    let dual = phase_grid.dual();
    let alphas: Vec<f64> = dual.gx.points().collect();
    let ys: Vec<f64> = phase_grid.gx.points().collect();
    let conj_psi: Vec<Complex64> = ys.iter().map(|&y| psi.eval(y).conj()).collect();
    let mut values = Array2::zeros(dual.shape());
    let mut buf = vec![Complex64::new(0.0, 0.0); ys.len()];
    for (j, beta) in dual.gp.points().enumerate() {
        for ((b, &y), c) in buf.iter_mut().zip(&ys).zip(&conj_psi) {
            *b = c * psi.eval(y - beta * hbar);
        }
        plan.forward_in_place(&mut buf);
        for (i, (&alpha, u)) in alphas.iter().zip(&buf).enumerate() {
            values[[i, j]] = Complex64::cis(alpha * beta * hbar / 2.0) * u / (2.0 * PI).sqrt();
        }
    }
    Ok(CharacteristicFunction { grid: dual, phase_grid: *phase_grid, values, hbar })
}

/// Wigner function of `psi` on `grid`, row by row as one inverse transform
/// in `β` (the dual of the `p` axis).
pub fn wigner_transform(psi: &WaveFunction, grid: &Grid2D) -> Result<QuasiDistribution> {
    let hbar = psi.hbar();
    let plan = Fourier1D::new(grid.gp);
    let betas: Vec<f64> = plan.dual().points().collect();
    let mut values = Array2::zeros(grid.shape());
    let mut buf = vec![Complex64::new(0.0, 0.0); betas.len()];
    let (mut edge, mut peak, mut residue) = (0.0f64, 0.0f64, 0.0f64);
    for (i, x) in grid.gx.points().enumerate() {
        for (b, &beta) in buf.iter_mut().zip(&betas) {
            *b = psi.eval(x + beta * hbar / 2.0).conj() * psi.eval(x - beta * hbar / 2.0);
        }
        edge = edge.max(buf[0].norm()).max(buf[buf.len() - 1].norm());
        peak = buf.iter().fold(peak, |m, v| m.max(v.norm()));
        plan.inverse_in_place(&mut buf);
        for (j, v) in buf.iter().enumerate() {
            let v = v / (2.0 * PI).sqrt();
            values[[i, j]] = v.re;
            residue = residue.max(v.im.abs());
        }
    }
    if peak > 0.0 && edge / peak > DECAY_TOL {
        return Err(Error::Decay { what: "Wigner integrand in β (p spacing too coarse)", ratio: edge / peak });
    }
    if residue > IMAG_RESIDUE_TOL {
        return Err(Error::Precondition(format!("Wigner transform imaginary residue {residue:e}")));
    }
    let f = QuasiDistribution { grid: *grid, values, hbar };
    let border = border_ratio(&f.values);
    if border > 1e-10 {
        log::warn!("Wigner function does not decay at the phase-space border (ratio {border:.2e})");
    }
    Ok(f)
}

/// Inverse two-dimensional transform of a sampled characteristic function.
pub fn wigner_from_characteristic(cf: &CharacteristicFunction) -> Result<QuasiDistribution> {
    let peak = cf.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let abs = cf.values.mapv(|v| v.norm());
    let edge = border_ratio(&abs) * peak;
    if peak > 0.0 && edge / peak > DECAY_TOL {
        return Err(Error::Decay { what: "characteristic function", ratio: edge / peak });
    }
    let plan = Fourier2D::new(cf.phase_grid);
    let mut data = cf.values.clone();
    plan.inverse_in_place(&mut data);
    let residue = data.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
    if residue > IMAG_RESIDUE_TOL {
        return Err(Error::Precondition(format!("characteristic inversion imaginary residue {residue:e}")));
    }
    Ok(QuasiDistribution { grid: cf.phase_grid, values: data.mapv(|v| v.re), hbar: cf.hbar })
}

/// Largest border magnitude relative to the largest magnitude.
fn border_ratio(values: &Array2<f64>) -> f64 {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return 0.0;
    }
    let (nx, np) = values.dim();
    let mut edge = 0.0f64;
    for i in 0..nx {
        edge = edge.max(values[[i, 0]].abs()).max(values[[i, np - 1]].abs());
    }
    for j in 0..np {
        edge = edge.max(values[[0, j]].abs()).max(values[[nx - 1, j]].abs());
    }
    edge / peak
}

/// Total weight of the negative part: `∬ max(−f, 0)` or `Σ max(−p_k, 0)`.
pub trait NegativeVolume {
    fn negative_volume(&self) -> f64;
}

impl NegativeVolume for QuasiDistribution {
    fn negative_volume(&self) -> f64 {
        self.values.iter().map(|v| (-v).max(0.0)).sum::<f64>() * self.grid.cell_area()
    }
}

impl NegativeVolume for [f64] {
    fn negative_volume(&self) -> f64 {
        self.iter().map(|v| (-v).max(0.0)).sum()
    }
}

pub fn negative_volume<T: NegativeVolume + ?Sized>(f: &T) -> f64 {
    f.negative_volume()
}
