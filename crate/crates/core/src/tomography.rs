//! Marginals of `z = ax + bp`, the slice relation between a phase-space
//! function and its marginals, Fourier-slice reconstruction and the two
//! classic modifications that leave the position and momentum marginals
//! intact.
//!
//! For any integrable `f`, the marginal along `(a, b)` satisfies
//! `ĝ(ζ) = √(2π)·f̂(aζ, bζ)`. The quantum side computes the same transform
//! from `⟨ψ| e^{−iζ(aX+bP)} |ψ⟩`, so comparing the two is a direct check that
//! `f` has the right marginal for the observable `aX + bP`.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::interp::{lagrange, lagrange_strided, DEFAULT_ORDER};
use crate::numerics::{edge_ratio, Fourier1D, Fourier2D, Grid1D, Grid2D, SampledFunction1D};
use crate::states::{DirectionAB, WaveFunction};
use crate::wigner::{characteristic_function, QuasiDistribution, DECAY_TOL, IMAG_RESIDUE_TOL};

/// Density `g(z)` of `z = ax + bp` on a grid over `z`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Marginal {
    pub direction: DirectionAB,
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl Marginal {
    pub fn new(direction: DirectionAB, grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::GridMismatch(format!("{} values for {} points", values.len(), grid.n)));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("marginal"));
        }
        Ok(Self { direction, grid, values })
    }

    pub fn normalization(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx()
    }

    pub fn max_abs_diff(&self, other: &Marginal) -> Result<f64> {
        if !self.grid.approx_eq(&other.grid) {
            return Err(Error::GridMismatch("marginals on different z grids".into()));
        }
        Ok(self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Interpolated value at `z`, zero outside the grid.
    pub fn interpolate(&self, z: f64) -> f64 {
        lagrange(&self.values, &self.grid, z, DEFAULT_ORDER)
    }

    pub fn to_sampled(&self) -> SampledFunction1D {
        SampledFunction1D { grid: self.grid, values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect() }
    }

    /// `ĝ(ζ)` on the dual of the z grid.
    pub fn transform(&self) -> SampledFunction1D {
        let plan = Fourier1D::new(self.grid);
        let mut data = self.to_sampled().values;
        plan.forward_in_place(&mut data);
        SampledFunction1D { grid: *plan.dual(), values: data }
    }
}

/// A z grid spanning the projection of `grid` onto `z = ax + bp`.
///
/// Spacing is `|d|·min(dx, dp)`; axis directions on a square lattice
/// reproduce the lattice itself.
pub fn projection_grid(grid: &Grid2D, d: DirectionAB) -> Result<Grid1D> {
    let (gx, gp) = (grid.gx, grid.gp);
    let xs = [gx.min, gx.point(gx.n - 1)];
    let ps = [gp.min, gp.point(gp.n - 1)];
    let corners: Vec<f64> = xs.iter().flat_map(|&x| ps.iter().map(move |&p| d.a * x + d.b * p)).collect();
    let lo = corners.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let dz = d.norm() * gx.dx().min(gp.dx());
    let mut n = ((hi - lo) / dz - 1e-9).ceil() as usize + 1;
    n += n % 2;
    Grid1D::new(lo, lo + n as f64 * dz, n)
}

/// Marginal of `f` along `d` by line integration.
///
/// Integrates over `x` when `|b| ≥ |a|` and over `p` otherwise, with the
/// Jacobian `1/|b|` or `1/|a|`. Off-lattice values of `f` come from 8-point
/// Lagrange interpolation along the other axis; lattice points are read
/// exactly.
pub fn marginal_of_quasi(f: &QuasiDistribution, d: DirectionAB, zgrid: &Grid1D) -> Result<Marginal> {
    let d = DirectionAB::new(d.a, d.b)?;
    let (gx, gp) = (f.grid.gx, f.grid.gp);
    let over_x = d.b.abs() >= d.a.abs();
    let values: Vec<f64> = zgrid
        .points()
        .map(|z| {
            if over_x {
                let s: f64 = gx
                    .points()
                    .enumerate()
                    .map(|(i, x)| lagrange_strided(|j| f.values[[i, j]], &gp, (z - d.a * x) / d.b, DEFAULT_ORDER))
                    .sum();
                s * gx.dx() / d.b.abs()
            } else {
                let s: f64 = gp
                    .points()
                    .enumerate()
                    .map(|(j, p)| lagrange_strided(|i| f.values[[i, j]], &gx, (z - d.b * p) / d.a, DEFAULT_ORDER))
                    .sum();
                s * gp.dx() / d.a.abs()
            }
        })
        .collect();
    let ratio = edge_ratio(&values, f64::abs);
    if ratio > DECAY_TOL {
        return Err(Error::Decay { what: "marginal (z grid does not cover the projected support)", ratio });
    }
    Marginal::new(d, *zgrid, values)
}

/// Distribution of outcomes of `aX + bP` in state `psi`, through its
/// characteristic function on the dual of `zgrid`.
pub fn quantum_marginal(psi: &WaveFunction, d: DirectionAB, zgrid: &Grid1D) -> Result<Marginal> {
    let d = DirectionAB::new(d.a, d.b)?;
    let plan = Fourier1D::new(*zgrid);
    let mut data = plan
        .dual()
        .points()
        .map(|zeta| characteristic_function(psi, d.a * zeta, d.b * zeta).map(|c| c / (2.0 * PI).sqrt()))
        .collect::<Result<Vec<_>>>()?;
    let ratio = edge_ratio(&data, |v: Complex64| v.norm());
    if ratio > DECAY_TOL {
        return Err(Error::Decay { what: "characteristic function on the dual z grid", ratio });
    }
    plan.inverse_in_place(&mut data);
    let residue = data.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
    if residue > IMAG_RESIDUE_TOL {
        return Err(Error::Precondition(format!("quantum marginal imaginary residue {residue:e}")));
    }
    Marginal::new(d, *zgrid, data.iter().map(|v| v.re).collect())
}

/// Max abs difference between `ĝ(ζ)` (marginal, then 1-D transform) and
/// `√(2π)·f̂(aζ, bζ)` (2-D transform evaluated on the ray).
pub fn verify_j2m(f: &QuasiDistribution, d: DirectionAB) -> Result<f64> {
    let zgrid = projection_grid(&f.grid, d)?;
    let lhs = marginal_of_quasi(f, d, &zgrid)?.transform();
    let root = (2.0 * PI).sqrt();
    Ok(lhs
        .grid
        .points()
        .zip(&lhs.values)
        .map(|(zeta, l)| (l - root * f.fourier_at(d.a * zeta, d.b * zeta)).norm())
        .fold(0.0, f64::max))
}

/// Options for [`reconstruct_with`].
#[derive(Clone, Copy, Debug)]
pub struct ReconstructionOptions {
    /// Largest angular gap bridged by interpolation.
    pub max_gap: f64,
    /// Zero-fill wider gaps instead of failing.
    pub allow_gaps: bool,
}

impl Default for ReconstructionOptions {
    fn default() -> Self {
        Self { max_gap: PI / 16.0, allow_gaps: false }
    }
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub quasi: QuasiDistribution,
    /// Angular intervals `(from, to)` wider than `max_gap`.
    pub gaps: Vec<(f64, f64)>,
}

struct Ray {
    theta: f64,
    /// `self.direction = lambda·(cos θ, sin θ)`.
    lambda: f64,
    zeta: Grid1D,
    spectrum: Vec<Complex64>,
}

impl Ray {
    /// `f̂(ρ cos θ, ρ sin θ)`.
    fn at(&self, rho: f64) -> Complex64 {
        lagrange(&self.spectrum, &self.zeta, rho / self.lambda, DEFAULT_ORDER)
    }
}

/// Fourier-slice reconstruction; fails when the angular coverage has gaps.
pub fn reconstruct_from_marginals(marginals: &[Marginal], grid: &Grid2D, hbar: f64) -> Result<QuasiDistribution> {
    reconstruct_with(marginals, grid, hbar, ReconstructionOptions::default()).map(|r| r.quasi)
}

/// Places `ĝ_θ(ζ)/√(2π)` on the polar ray at angle `θ`, interpolates to the
/// Cartesian dual of `grid` (Lagrange in radius, linear in angle) and
/// inverts the 2-D transform.
pub fn reconstruct_with(
    marginals: &[Marginal],
    grid: &Grid2D,
    hbar: f64,
    opts: ReconstructionOptions,
) -> Result<Reconstruction> {
    if marginals.len() < 2 {
        return Err(Error::Precondition(format!("need at least 2 directions, got {}", marginals.len())));
    }
    let root = (2.0 * PI).sqrt();
    let mut rays: Vec<Ray> = marginals
        .iter()
        .map(|m| {
            let (theta, lambda) = m.direction.half_circle_angle();
            let t = m.transform();
            Ray { theta, lambda, zeta: t.grid, spectrum: t.values.iter().map(|v| v / root).collect() }
        })
        .collect();
    rays.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    for w in rays.windows(2) {
        if w[1].theta - w[0].theta < 1e-12 {
            return Err(Error::Precondition(format!("duplicate direction at θ = {}", w[0].theta)));
        }
    }
    let m = rays.len();
    let gap_after = |k: usize| {
        if k + 1 < m {
            rays[k + 1].theta - rays[k].theta
        } else {
            rays[0].theta + PI - rays[k].theta
        }
    };
    let gaps: Vec<(f64, f64)> = (0..m)
        .filter(|&k| gap_after(k) > opts.max_gap)
        .map(|k| (rays[k].theta, rays[k].theta + gap_after(k)))
        .collect();
    if !gaps.is_empty() && !opts.allow_gaps {
        let list: Vec<String> = gaps.iter().map(|(a, b)| format!("({a:.4}, {b:.4})")).collect();
        return Err(Error::Coverage(format!("angular gaps wider than {:.4}: {}", opts.max_gap, list.join(", "))));
    }

    let dual = grid.dual();
    let alphas: Vec<f64> = dual.gx.points().collect();
    let betas: Vec<f64> = dual.gp.points().collect();
    let mut spectrum = Array2::zeros(dual.shape());
    for (i, &alpha) in alphas.iter().enumerate() {
        for (j, &beta) in betas.iter().enumerate() {
            spectrum[[i, j]] = polar_lookup(&rays, alpha, beta, opts.max_gap);
        }
    }
    Fourier2D::new(*grid).inverse_in_place(&mut spectrum);
    let quasi = QuasiDistribution::new(*grid, spectrum.mapv(|v| v.re), hbar)?;
    Ok(Reconstruction { quasi, gaps })
}

fn polar_lookup(rays: &[Ray], alpha: f64, beta: f64, max_gap: f64) -> Complex64 {
    let mut rho = alpha.hypot(beta);
    if rho == 0.0 {
        return rays[0].at(0.0);
    }
    let mut phi = beta.atan2(alpha);
    if phi < 0.0 {
        phi += PI;
        rho = -rho;
    }
    if phi >= PI {
        phi -= PI;
        rho = -rho;
    }
    let m = rays.len();
    // bracket (lo, hi) in the extended angle list; the wrap ray sits at θ ± π
    // and is read at −ρ
    let k = rays.partition_point(|r| r.theta <= phi);
    let (lo_theta, lo, hi_theta, hi) = if k == 0 {
        (rays[m - 1].theta - PI, rays[m - 1].at(-rho), rays[0].theta, rays[0].at(rho))
    } else if k == m {
        (rays[m - 1].theta, rays[m - 1].at(rho), rays[0].theta + PI, rays[0].at(-rho))
    } else {
        (rays[k - 1].theta, rays[k - 1].at(rho), rays[k].theta, rays[k].at(rho))
    };
    let span = hi_theta - lo_theta;
    let w = (phi - lo_theta) / span;
    if w < 1e-12 {
        return lo;
    }
    if span > max_gap {
        return Complex64::new(0.0, 0.0);
    }
    lo * (1.0 - w) + hi * w
}

/// Adds `+c` on cells of the centred rectangle where `sign(x) = sign(p)`
/// and `−c` where they differ. Cells on either axis are left unchanged.
pub fn rectangle_modification(
    f: &QuasiDistribution,
    half_width: f64,
    half_height: f64,
    c: f64,
) -> Result<QuasiDistribution> {
    let (gx, gp) = (f.grid.gx, f.grid.gp);
    if !(half_width > 0.0 && half_height > 0.0) {
        return Err(Error::Precondition("rectangle half sizes must be positive".into()));
    }
    for (g, h, name) in [(gx, half_width, "x"), (gp, half_height, "p")] {
        if -h < g.min || h > g.point(g.n - 1) {
            return Err(Error::Precondition(format!("rectangle exceeds the {name} range of the grid")));
        }
        let t = g.index_of(0.0);
        if (t - t.round()).abs() > 1e-9 {
            return Err(Error::Precondition(format!("origin is not a lattice point of the {name} axis")));
        }
    }
    let (ox, op) = (zero_index(&gx), zero_index(&gp));
    let kx = (half_width / gx.dx() + 1e-9).floor() as isize;
    let kp = (half_height / gp.dx() + 1e-9).floor() as isize;
    let mut out = f.clone();
    for i in -kx..=kx {
        for j in -kp..=kp {
            if i == 0 || j == 0 {
                continue;
            }
            let s = if (i > 0) == (j > 0) { c } else { -c };
            out.values[[(ox + i) as usize, (op + j) as usize]] += s;
        }
    }
    Ok(out)
}

/// `f(x, p) + c·x·p·e^{−ax²−bp²}`.
pub fn smooth_modification(f: &QuasiDistribution, a: f64, b: f64, c: f64) -> Result<QuasiDistribution> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Precondition(format!("a and b must be positive, got a = {a}, b = {b}")));
    }
    let bump = QuasiDistribution::from_fn(f.grid, f.hbar, |x, p| c * x * p * (-a * x * x - b * p * p).exp());
    Ok(QuasiDistribution { values: &f.values + &bump.values, ..f.clone() })
}

/// Per-direction comparison of a phase-space function with the quantum
/// prediction.
#[derive(Clone, Debug, Serialize)]
pub struct DirectionScan {
    pub theta: f64,
    pub residual: f64,
    pub residuals: Vec<(f64, f64)>,
}

/// Angle with the largest `max |marginal_of_quasi − quantum_marginal|`.
pub fn find_violated_direction(f: &QuasiDistribution, psi: &WaveFunction, thetas: &[f64]) -> Result<DirectionScan> {
    if thetas.is_empty() {
        return Err(Error::Precondition("empty angle list".into()));
    }
    let residuals = thetas
        .iter()
        .map(|&theta| {
            let d = DirectionAB::from_angle(theta);
            let zgrid = projection_grid(&f.grid, d)?;
            let r = marginal_of_quasi(f, d, &zgrid)?.max_abs_diff(&quantum_marginal(psi, d, &zgrid)?)?;
            Ok((theta, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let (theta, residual) =
        residuals.iter().cloned().fold((thetas[0], f64::NEG_INFINITY), |best, r| if r.1 > best.1 { r } else { best });
    Ok(DirectionScan { theta, residual, residuals })
}

/// `n` equispaced angles `kπ/n` covering the half circle.
pub fn half_circle(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 * PI / n as f64).collect()
}

fn zero_index(g: &Grid1D) -> isize {
    g.index_of(0.0).round() as isize
}
