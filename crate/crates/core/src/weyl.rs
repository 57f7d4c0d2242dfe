//! Weyl quantization in a truncated oscillator basis.
//!
//! A phase-space function `g` maps to
//!
//! ```text
//! g(X, P) = (1/2π) ∬ ĝ(α, β) e^{i(αX+βP)} dα dβ,
//! ```
//!
//! and the expectation of `g(X, P)` equals `∬ g f` with `f` the Wigner
//! function of the state.
//!
//! Truncated `X` and `P` satisfy `αX + βP = r·U_φ X U_φ†` with
//! `U_φ = diag(e^{iφm})`, `(α, β) = r(cos φ, sin φ)`, so every
//! displacement matrix follows from one eigendecomposition of `X`:
//! `e^{i(αX+βP)}_{mn} = e^{iφ(m−n)} Σ_k V_mk V_nk e^{irλ_k}`.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{quadrature, Fourier2D, Grid1D, Grid2D, SampledFunction1D};
use crate::states::{hermite_functions, WaveFunction};
use crate::wigner::{wigner_transform, QuasiDistribution};

/// Residual above which a truncation cross-check fails.
pub const TRUNCATION_TOL: f64 = 1e-8;
/// Damping used for polynomial symbols.
pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_DIM: usize = 64;

/// Square complex matrix in the basis `|0⟩ … |N−1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub entries: DMatrix<Complex64>,
    pub hbar: f64,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn identity(dim: usize, hbar: f64) -> Self {
        Self { entries: DMatrix::identity(dim, dim), hbar }
    }

    /// `max |M − M†|` over entries.
    pub fn hermiticity_residual(&self) -> f64 {
        let adj = self.entries.adjoint();
        (&self.entries - adj).iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        let r = self.hermiticity_residual();
        if r < tol {
            Ok(())
        } else {
            Err(Error::Precondition(format!("matrix is not Hermitian (residual {r:e})")))
        }
    }

    /// Max entry difference over the leading `k × k` block.
    pub fn block_diff(&self, other: &DMatrix<Complex64>, k: usize) -> f64 {
        let k = k.min(self.dim()).min(other.nrows());
        let mut m = 0.0f64;
        for i in 0..k {
            for j in 0..k {
                m = m.max((self.entries[(i, j)] - other[(i, j)]).norm());
            }
        }
        m
    }

    /// `c† M c`.
    pub fn expectation(&self, coeffs: &[Complex64]) -> Result<Complex64> {
        if coeffs.len() != self.dim() {
            return Err(Error::GridMismatch(format!("{} coefficients for dimension {}", coeffs.len(), self.dim())));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, ci) in coeffs.iter().enumerate() {
            let row: Complex64 = coeffs.iter().enumerate().map(|(j, cj)| self.entries[(i, j)] * cj).sum();
            acc += ci.conj() * row;
        }
        Ok(acc)
    }

    /// Entries as CSV `row,col,re,im`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["row", "col", "re", "im"])?;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = self.entries[(i, j)];
                w.write_record([i.to_string(), j.to_string(), format!("{:e}", v.re), format!("{:e}", v.im)])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Truncated `X = √(ħ/2)(a + a†)` and `P = i√(ħ/2)(a† − a)`.
pub fn oscillator_matrices(dim: usize, hbar: f64) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if dim < 2 {
        return Err(Error::Truncation(format!("dimension must be at least 2, got {dim}")));
    }
    let s = (hbar / 2.0).sqrt();
    let mut x = DMatrix::zeros(dim, dim);
    let mut p = DMatrix::zeros(dim, dim);
    for m in 0..dim - 1 {
        let v = s * ((m + 1) as f64).sqrt();
        x[(m, m + 1)] = Complex64::new(v, 0.0);
        x[(m + 1, m)] = Complex64::new(v, 0.0);
        p[(m, m + 1)] = Complex64::new(0.0, -v);
        p[(m + 1, m)] = Complex64::new(0.0, v);
    }
    Ok((OperatorMatrix { entries: x, hbar }, OperatorMatrix { entries: p, hbar }))
}

/// `e^{i(αX+βP)}` by matrix exponential, cross-checked on the interior
/// block against `e^{iαX} e^{iβP} e^{iαβħ/2}`.
pub fn displacement(alpha: f64, beta: f64, dim: usize, hbar: f64) -> Result<OperatorMatrix> {
    let (d, residual) = displacement_with_residual(alpha, beta, dim, hbar)?;
    if residual > TRUNCATION_TOL {
        return Err(Error::Truncation(format!(
            "dimension {dim} too small for (α, β) = ({alpha}, {beta}): split-product residual {residual:e}"
        )));
    }
    Ok(d)
}

/// Matrix exponential and the interior-block split-product residual.
pub fn displacement_with_residual(alpha: f64, beta: f64, dim: usize, hbar: f64) -> Result<(OperatorMatrix, f64)> {
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(Error::NonFinite("displacement arguments"));
    }
    let (x, p) = oscillator_matrices(dim, hbar)?;
    let i = Complex64::new(0.0, 1.0);
    let full = ((&x.entries * Complex64::new(alpha, 0.0) + &p.entries * Complex64::new(beta, 0.0)) * i).exp();
    let split =
        (&x.entries * (i * alpha)).exp() * (&p.entries * (i * beta)).exp() * Complex64::cis(alpha * beta * hbar / 2.0);
    let d = OperatorMatrix { entries: full, hbar };
    let residual = d.block_diff(&split, dim / 2);
    Ok((d, residual))
}

/// Eigendecomposition of truncated `X` reused across displacements.
#[derive(Clone, Debug)]
pub struct DisplacementBasis {
    pub dim: usize,
    pub hbar: f64,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl DisplacementBasis {
    pub fn new(dim: usize, hbar: f64) -> Result<Self> {
        let (x, _) = oscillator_matrices(dim, hbar)?;
        let eig = SymmetricEigen::new(x.entries.map(|v| v.re));
        Ok(Self { dim, hbar, eigenvalues: eig.eigenvalues.iter().cloned().collect(), eigenvectors: eig.eigenvectors })
    }

    /// Largest `|λ|` of truncated `X` (also of `P`).
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn displacement(&self, alpha: f64, beta: f64) -> OperatorMatrix {
        let (r, phi) = (alpha.hypot(beta), beta.atan2(alpha));
        let n = self.dim;
        let v = &self.eigenvectors;
        let phases: Vec<Complex64> = self.eigenvalues.iter().map(|l| Complex64::cis(r * l)).collect();
        let entries = DMatrix::from_fn(n, n, |m, k| {
            let s: Complex64 = (0..n).map(|q| phases[q] * (v[(m, q)] * v[(k, q)])).sum();
            s * Complex64::cis(phi * (m as f64 - k as f64))
        });
        OperatorMatrix { entries, hbar: self.hbar }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Shape {
    /// `Σ c x^j p^k · e^{−ε(x²+p²)}`, with the largest total degree.
    Damped {
        epsilon: f64,
        degree: u32,
    },
    Gaussian {
        a: f64,
        b: f64,
    },
    Sampled,
}

type Eval = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Transform = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;

/// Real symbol `g(x, p)` with an optional closed-form `ĝ(α, β)`.
#[derive(Clone)]
pub struct PhaseSpaceFunction {
    pub name: String,
    eval: Eval,
    transform: Option<Transform>,
    shape: Shape,
    terms: Vec<(f64, u32, u32)>,
}

impl std::fmt::Debug for PhaseSpaceFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PhaseSpaceFunction").field("name", &self.name).field("shape", &self.shape).finish()
    }
}

impl PhaseSpaceFunction {
    /// Symbol known only through its values; `ĝ` comes from an FFT.
    pub fn from_fn(name: &str, g: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), eval: Arc::new(g), transform: None, shape: Shape::Sampled, terms: vec![] }
    }

    /// `Σ c·x^j·p^k·e^{−ε(x²+p²)}` for terms `(c, j, k)`.
    pub fn damped_polynomial(name: &str, terms: &[(f64, u32, u32)], epsilon: f64) -> Result<Self> {
        if epsilon.is_nan() || epsilon <= 0.0 || terms.is_empty() {
            return Err(Error::Precondition("damped polynomial needs ε > 0 and at least one term".into()));
        }
        let t: Vec<(f64, u32, u32)> = terms.to_vec();
        let t_eval = t.clone();
        let eval = move |x: f64, p: f64| {
            let poly: f64 = t_eval.iter().map(|&(c, j, k)| c * x.powi(j as i32) * p.powi(k as i32)).sum();
            poly * (-epsilon * (x * x + p * p)).exp()
        };
        let t_hat = t.clone();
        let transform = move |alpha: f64, beta: f64| {
            t_hat
                .iter()
                .map(|&(c, j, k)| {
                    damped_monomial_factor(j, alpha, epsilon) * damped_monomial_factor(k, beta, epsilon) * c
                })
                .sum()
        };
        let degree = t.iter().map(|&(_, j, k)| j + k).max().unwrap_or(0);
        Ok(Self {
            name: name.into(),
            eval: Arc::new(eval),
            transform: Some(Arc::new(transform)),
            shape: Shape::Damped { epsilon, degree },
            terms: t,
        })
    }

    /// `e^{−ax² − bp²}`.
    pub fn gaussian(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Precondition(format!("Gaussian needs a, b > 0, got ({a}, {b})")));
        }
        let norm = 1.0 / (2.0 * (a * b).sqrt());
        Ok(Self {
            name: "gauss".into(),
            eval: Arc::new(move |x, p| (-a * x * x - b * p * p).exp()),
            transform: Some(Arc::new(move |al, be| {
                Complex64::new(norm * (-al * al / (4.0 * a) - be * be / (4.0 * b)).exp(), 0.0)
            })),
            shape: Shape::Gaussian { a, b },
            terms: vec![],
        })
    }

    /// Named member of the standard test set
    /// `x, p, x2, p2, xp, x2p2, gauss`.
    pub fn named(name: &str, epsilon: f64) -> Result<Self> {
        let terms: &[(f64, u32, u32)] = match name {
            "x" => &[(1.0, 1, 0)],
            "p" => &[(1.0, 0, 1)],
            "x2" => &[(1.0, 2, 0)],
            "p2" => &[(1.0, 0, 2)],
            "xp" => &[(1.0, 1, 1)],
            "x2p2" => &[(1.0, 2, 0), (1.0, 0, 2)],
            "gauss" => return Self::gaussian(1.0, 1.0),
            other => return Err(Error::Parse(format!("unknown phase-space function '{other}'"))),
        };
        Self::damped_polynomial(name, terms, epsilon)
    }

    pub fn eval(&self, x: f64, p: f64) -> f64 {
        (self.eval)(x, p)
    }

    pub fn transform_at(&self, alpha: f64, beta: f64) -> Option<Complex64> {
        self.transform.as_ref().map(|t| t(alpha, beta))
    }

    /// Polynomial terms `(c, j, k)` for damped polynomials.
    pub fn polynomial_terms(&self) -> Option<&[(f64, u32, u32)]> {
        matches!(self.shape, Shape::Damped { .. }).then_some(self.terms.as_slice())
    }

    /// Phase-space grid whose dual resolves `ĝ·e^{i(αX+βP)}` for a
    /// `dim`-dimensional truncation.
    pub fn quadrature_grid(&self, dim: usize, hbar: f64) -> Result<Grid2D> {
        let lambda = (2.0 * hbar * dim as f64).sqrt() + 1.0;
        let axis = |half: f64, step: f64| -> Result<Grid1D> {
            let mut n = ((2.0 * half / step).ceil() as usize).max(32);
            n += n % 2;
            let dual_step = 2.0 * half / n as f64;
            let dx = 2.0 * PI / (n as f64 * dual_step);
            Grid1D::centered(n as f64 * dx / 2.0, n)
        };
        match self.shape {
            Shape::Damped { epsilon, degree } => {
                let half = 2.0 * epsilon.sqrt() * (45f64.sqrt() + 1.0 + (degree as f64).sqrt() * 2.0);
                let step = 2.0 * PI / (lambda + (45.0 / epsilon).sqrt());
                let g = axis(half, step)?;
                Ok(Grid2D::new(g, g))
            }
            Shape::Gaussian { a, b } => {
                let ax = |c: f64| axis((180.0 * c).sqrt() + 1.0, 2.0 * PI / (lambda + (45.0 / c).sqrt() + 1.0));
                Ok(Grid2D::new(ax(a)?, ax(b)?))
            }
            Shape::Sampled => Err(Error::Precondition(format!(
                "'{}' has no closed-form transform; pass a quadrature grid explicitly",
                self.name
            ))),
        }
    }

    /// `ĝ` on the dual of `grid`: closed form when known, FFT otherwise.
    pub fn transform_on(&self, grid: &Grid2D) -> ndarray::Array2<Complex64> {
        let dual = grid.dual();
        match &self.transform {
            Some(t) => {
                let al: Vec<f64> = dual.gx.points().collect();
                let be: Vec<f64> = dual.gp.points().collect();
                ndarray::Array2::from_shape_fn(dual.shape(), |(i, j)| t(al[i], be[j]))
            }
            None => {
                let xs: Vec<f64> = grid.gx.points().collect();
                let ps: Vec<f64> = grid.gp.points().collect();
                let mut data =
                    ndarray::Array2::from_shape_fn(grid.shape(), |(i, j)| Complex64::new(self.eval(xs[i], ps[j]), 0.0));
                Fourier2D::new(*grid).forward_in_place(&mut data);
                data
            }
        }
    }
}

/// One-dimensional factor of the transform of `x^j e^{−εx²}`:
/// `(−i)^j (2√ε)^{−j} H_j(u) e^{−u²} / √(2ε)`, `u = α/(2√ε)`.
pub fn damped_monomial_factor(j: u32, alpha: f64, epsilon: f64) -> Complex64 {
    let s = 2.0 * epsilon.sqrt();
    let u = alpha / s;
    let (mut h0, mut h1) = (1.0, 2.0 * u);
    let h = match j {
        0 => h0,
        _ => {
            for k in 1..j {
                let h2 = 2.0 * u * h1 - 2.0 * k as f64 * h0;
                h0 = h1;
                h1 = h2;
            }
            h1
        }
    };
    let phase = match j % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    phase * (h * s.powi(-(j as i32)) * (-u * u).exp() / (2.0 * epsilon).sqrt())
}

/// `(1/2π) ∬ ĝ e^{i(αX+βP)} dα dβ` by quadrature over the dual of `grid`.
pub fn weyl_quantize(g: &PhaseSpaceFunction, dim: usize, hbar: f64, grid: &Grid2D) -> Result<OperatorMatrix> {
    let basis = DisplacementBasis::new(dim, hbar)?;
    let hat = g.transform_on(grid);
    let dual = grid.dual();
    let peak = hat.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let (na, nb) = hat.dim();
    let mut edge = 0.0f64;
    for i in 0..na {
        edge = edge.max(hat[[i, 0]].norm()).max(hat[[i, nb - 1]].norm());
    }
    for j in 0..nb {
        edge = edge.max(hat[[0, j]].norm()).max(hat[[na - 1, j]].norm());
    }
    if peak > 0.0 && edge / peak > 1e-10 {
        return Err(Error::Decay { what: "symbol transform ĝ on the dual grid", ratio: edge / peak });
    }
    let weight = dual.cell_area() / (2.0 * PI);
    let n = dim;
    let lam = &basis.eigenvalues;
    // S[k][d + n − 1] = Σ w ĝ e^{irλ_k} e^{iφd}
    let mut s = vec![Complex64::new(0.0, 0.0); n * (2 * n - 1)];
    let cutoff = 1e-16 * peak;
    let mut a_k = vec![Complex64::new(0.0, 0.0); n];
    let mut b_d = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
    for (i, alpha) in dual.gx.points().enumerate() {
        for (j, beta) in dual.gp.points().enumerate() {
            let h = hat[[i, j]];
            if h.norm() <= cutoff {
                continue;
            }
            let (r, phi) = (alpha.hypot(beta), beta.atan2(alpha));
            for (a, l) in a_k.iter_mut().zip(lam) {
                *a = h * weight * Complex64::cis(r * l);
            }
            let step = Complex64::cis(phi);
            b_d[n - 1] = Complex64::new(1.0, 0.0);
            for d in 1..n {
                b_d[n - 1 + d] = b_d[n - 2 + d] * step;
                b_d[n - 1 - d] = b_d[n - 1 + d].conj();
            }
            for (k, a) in a_k.iter().enumerate() {
                let row = &mut s[k * (2 * n - 1)..(k + 1) * (2 * n - 1)];
                for (acc, b) in row.iter_mut().zip(&b_d) {
                    *acc += a * b;
                }
            }
        }
    }
    let v = &basis.eigenvectors;
    let entries = DMatrix::from_fn(n, n, |m, q| {
        let d = m + n - 1 - q;
        (0..n).map(|k| s[k * (2 * n - 1) + d] * (v[(m, k)] * v[(q, k)])).sum()
    });
    Ok(OperatorMatrix { entries, hbar })
}

/// Weyl quantization with the grid from [`PhaseSpaceFunction::quadrature_grid`].
pub fn weyl_quantize_auto(g: &PhaseSpaceFunction, dim: usize, hbar: f64) -> Result<OperatorMatrix> {
    weyl_quantize(g, dim, hbar, &g.quadrature_grid(dim, hbar)?)
}

/// Symmetric-ordered quantization of an undamped polynomial: damped
/// quantizations at `ε₀, ε₀/2, ε₀/4` combined to cancel the `O(ε)` and
/// `O(ε²)` terms.
pub fn weyl_quantize_polynomial(
    terms: &[(f64, u32, u32)],
    dim: usize,
    hbar: f64,
    epsilon0: f64,
) -> Result<OperatorMatrix> {
    let at = |e: f64| weyl_quantize_auto(&PhaseSpaceFunction::damped_polynomial("poly", terms, e)?, dim, hbar);
    let (w1, w2, w4) = (at(epsilon0)?, at(epsilon0 / 2.0)?, at(epsilon0 / 4.0)?);
    let entries = (w4.entries * Complex64::new(8.0, 0.0) - w2.entries * Complex64::new(6.0, 0.0) + w1.entries)
        / Complex64::new(3.0, 0.0);
    Ok(OperatorMatrix { entries, hbar })
}

/// Coefficients `⟨n|ψ⟩` for `n < dim`; fails when the remaining weight
/// `1 − Σ|c_n|²` exceeds `1e−10`.
pub fn oscillator_coefficients(psi: &WaveFunction, dim: usize) -> Result<Vec<Complex64>> {
    let hbar = psi.hbar();
    let grid = psi.support_grid();
    let scale = hbar.sqrt();
    let xs: Vec<f64> = grid.points().collect();
    let psi_vals: Vec<Complex64> = xs.iter().map(|&x| psi.eval(x)).collect();
    let basis: Vec<Vec<f64>> = xs.iter().map(|&x| hermite_functions(x / scale, dim - 1)).collect();
    let coeffs: Vec<Complex64> = (0..dim)
        .map(|n| {
            let integrand = SampledFunction1D {
                grid,
                values: basis.iter().zip(&psi_vals).map(|(h, v)| v * (h[n] / scale.sqrt())).collect(),
            };
            quadrature(&integrand)
        })
        .collect();
    let norm: f64 = psi_vals.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.dx();
    let tail = norm - coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>();
    if tail > 1e-10 {
        return Err(Error::Truncation(format!("oscillator expansion tail {tail:e} at dimension {dim}")));
    }
    Ok(coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct MoyalCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
}

/// `⟨ψ|g(X,P)|ψ⟩` against `∬ g f dx dp` with `f` the Wigner function.
pub fn moyal_expectation_check(g: &PhaseSpaceFunction, psi: &WaveFunction, dim: usize) -> Result<MoyalCheck> {
    let hbar = psi.hbar();
    let coeffs = oscillator_coefficients(psi, dim)?;
    let op = weyl_quantize_auto(g, dim, hbar)?;
    let lhs = op.expectation(&coeffs)?.re;
    let f = wigner_transform(psi, &psi.phase_space_grid(256)?)?;
    let rhs = phase_space_average(g, &f);
    Ok(MoyalCheck { lhs, rhs, diff: (lhs - rhs).abs() })
}

/// `∬ g f dx dp` on the lattice of `f`.
pub fn phase_space_average(g: &PhaseSpaceFunction, f: &QuasiDistribution) -> f64 {
    let xs: Vec<f64> = f.grid.gx.points().collect();
    let ps: Vec<f64> = f.grid.gp.points().collect();
    let mut acc = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        for (j, &p) in ps.iter().enumerate() {
            acc += g.eval(x, p) * f.values[[i, j]];
        }
    }
    acc * f.grid.cell_area()
}

/// Both sides of `∬ g f dx dp = ∬ ĝ·conj(f̂) dα dβ` for real `f`.
pub fn parseval_check(g: &PhaseSpaceFunction, f: &QuasiDistribution) -> (f64, Complex64) {
    let lhs = phase_space_average(g, f);
    let hat_g = g.transform_on(&f.grid);
    let hat_f = f.transform();
    let rhs: Complex64 =
        hat_g.iter().zip(hat_f.values.iter()).map(|(a, b)| a * b.conj()).sum::<Complex64>() * hat_f.grid.cell_area();
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{gaussian_state, oscillator_eigenstate};
    use crate::wigner::characteristic_function;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ladder_matrices() {
        let (x, p) = oscillator_matrices(2, 1.0).unwrap();
        let r = 0.5f64.sqrt();
        assert_eq!(x.entries, DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(r, 0.0), c(r, 0.0), c(0.0, 0.0)]));
        assert_eq!(x.hermiticity_residual(), 0.0);
        assert_eq!(p.hermiticity_residual(), 0.0);
        assert!(oscillator_matrices(1, 1.0).is_err());
        let hbar = 0.7;
        let (x, p) = oscillator_matrices(8, hbar).unwrap();
        let comm = &x.entries * &p.entries - &p.entries * &x.entries;
        for i in 0..8 {
            let expect = if i < 7 { c(0.0, hbar) } else { c(0.0, -hbar * 7.0) };
            assert!((comm[(i, i)] - expect).norm() < 1e-14);
            for j in 0..8 {
                if i != j {
                    assert!(comm[(i, j)].norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn displacement_properties() {
        let d = displacement(0.0, 0.0, 16, 1.0).unwrap();
        assert!(d.block_diff(&DMatrix::identity(16, 16), 16) < 1e-15);
        let d = displacement(0.8, -0.6, 48, 1.0).unwrap();
        let unit = &d.entries * d.entries.adjoint();
        assert!((unit - DMatrix::<Complex64>::identity(48, 48)).iter().all(|v| v.norm() < 1e-10));
        let d = displacement(-1.0, -1.0, 64, 1.0).unwrap();
        assert!((d.entries[(0, 0)] - (-0.5f64).exp()).norm() < 1e-6);
        assert!(matches!(displacement(6.0, 6.0, 8, 1.0), Err(Error::Truncation(_))));
    }

    #[test]
    fn split_product_needs_the_plus_sign() {
        let (d, residual) = displacement_with_residual(0.9, 0.7, 48, 1.0).unwrap();
        assert!(residual < 1e-12);
        let (x, p) = oscillator_matrices(48, 1.0).unwrap();
        let i = c(0.0, 1.0);
        let wrong = (&x.entries * (i * 0.9)).exp() * (&p.entries * (i * 0.7)).exp() * Complex64::cis(-0.9 * 0.7 / 2.0);
        assert!(d.block_diff(&wrong, 24) > 0.1);
    }

    #[test]
    fn eigen_displacement_matches_exponential() {
        let basis = DisplacementBasis::new(40, 1.3).unwrap();
        for (a, b) in [(0.3, 0.0), (-0.7, 1.1), (0.0, -2.0), (1.5, 0.4)] {
            let fast = basis.displacement(a, b);
            let (slow, _) = displacement_with_residual(a, b, 40, 1.3).unwrap();
            assert!(fast.block_diff(&slow.entries, 40) < 1e-12);
        }
    }

    #[test]
    fn matrix_characteristic_function_matches_integral() {
        let psi = gaussian_state(0.8, -0.4, 1.0, 1.0).unwrap();
        let coeffs = oscillator_coefficients(&psi, 64).unwrap();
        let basis = DisplacementBasis::new(64, 1.0).unwrap();
        for a in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            for b in [-1.0, -0.5, 0.0, 0.5, 1.0] {
                let m = basis.displacement(-a, -b).expectation(&coeffs).unwrap();
                let q = characteristic_function(&psi, a, b).unwrap();
                assert!((m - q).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn monomial_factor_matches_quadrature() {
        let eps = 0.05;
        for j in 0..5 {
            for alpha in [-1.3, 0.0, 0.4, 2.2] {
                let g = crate::numerics::Grid1D::centered(40.0, 4096).unwrap();
                let f = SampledFunction1D::from_fn(g, |x| {
                    Complex64::new(x.powi(j as i32) * (-eps * x * x).exp(), 0.0) * Complex64::cis(-alpha * x)
                });
                let direct = quadrature(&f) / (2.0 * PI).sqrt();
                assert!((direct - damped_monomial_factor(j, alpha, eps)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn symmetric_ordering_of_xp() {
        let (x, p) = oscillator_matrices(32, 1.0).unwrap();
        let sym = (&x.entries * &p.entries + &p.entries * &x.entries) * c(0.5, 0.0);
        let w = weyl_quantize_polynomial(&[(1.0, 1, 1)], 32, 1.0, 1e-4).unwrap();
        assert!(w.block_diff(&sym, 16) < 1e-6, "{}", w.block_diff(&sym, 16));
        assert!(w.hermiticity_residual() < 1e-8);
        let xp = &x.entries * &p.entries;
        assert!(w.block_diff(&xp, 16) > 0.4);
    }

    #[test]
    fn quadratic_symbol() {
        let (x, p) = oscillator_matrices(32, 1.0).unwrap();
        let target = &x.entries * &x.entries + &p.entries * &p.entries;
        let w = weyl_quantize_polynomial(&[(1.0, 2, 0), (1.0, 0, 2)], 32, 1.0, 1e-4).unwrap();
        assert!(w.block_diff(&target, 16) < 1e-4);
    }

    #[test]
    fn gaussian_symbol_is_ground_projector() {
        let g = PhaseSpaceFunction::gaussian(1.0, 1.0).unwrap();
        let w = weyl_quantize_auto(&g, 64, 1.0).unwrap();
        assert!(w.hermiticity_residual() < 1e-8);
        let mut proj = DMatrix::zeros(64, 64);
        proj[(0, 0)] = c(0.5, 0.0);
        // the wide symbol reaches the truncation edge; entries near N/2 carry ~1e-6
        assert!(w.block_diff(&proj, 16) < 1e-8);
        assert!(w.block_diff(&proj, 32) < 1e-5);
        // Tr g(X,P) = (1/2πħ) ∬ g = π/(2π)
        let trace: Complex64 = (0..16).map(|i| w.entries[(i, i)]).sum();
        assert!((trace - 0.5).norm() < 1e-8);
    }

    #[test]
    fn sampled_symbol_matches_closed_form() {
        let closed = PhaseSpaceFunction::gaussian(0.8, 1.4).unwrap();
        let sampled = PhaseSpaceFunction::from_fn("g", |x, p| (-0.8 * x * x - 1.4 * p * p).exp());
        assert!(sampled.quadrature_grid(32, 1.0).is_err());
        let grid = closed.quadrature_grid(32, 1.0).unwrap();
        let a = weyl_quantize(&closed, 32, 1.0, &grid).unwrap();
        let b = weyl_quantize(&sampled, 32, 1.0, &grid).unwrap();
        assert!(a.block_diff(&b.entries, 32) < 1e-9);
    }

    #[test]
    fn undecayed_transform_is_rejected() {
        let g = PhaseSpaceFunction::gaussian(1.0, 1.0).unwrap();
        let coarse = Grid2D::square(8.0, 16).unwrap();
        assert!(matches!(weyl_quantize(&g, 16, 1.0, &coarse), Err(Error::Decay { .. })));
    }

    #[test]
    fn moyal_examples() {
        let psi0 = oscillator_eigenstate(0, 1.0).unwrap();
        let psi1 = oscillator_eigenstate(1, 1.0).unwrap();
        let coh = gaussian_state(1.0, -0.5, 1.0, 1.0).unwrap();
        let x2 = PhaseSpaceFunction::named("x2", DEFAULT_EPSILON).unwrap();
        let m = moyal_expectation_check(&x2, &psi0, 64).unwrap();
        // ∬ x² e^{-ε(x²+p²)} e^{-x²-p²}/π = 1/(2(1+ε)²)
        let exact = 0.5 / (1.0 + DEFAULT_EPSILON).powi(2);
        assert!((m.lhs - exact).abs() < 1e-8 && m.diff < 1e-5);
        let xp = PhaseSpaceFunction::named("xp", DEFAULT_EPSILON).unwrap();
        let m = moyal_expectation_check(&xp, &psi0, 64).unwrap();
        assert!(m.lhs.abs() < 1e-6 && m.rhs.abs() < 1e-6);
        let gauss = PhaseSpaceFunction::named("gauss", DEFAULT_EPSILON).unwrap();
        // mpmath quadrature of ∬ e^{-x²-p²} W
        for (psi, oracle) in [(&psi0, 0.5), (&psi1, 0.0), (&coh, 0.2676307142594952)] {
            let m = moyal_expectation_check(&gauss, psi, 64).unwrap();
            assert!((m.lhs - oracle).abs() < 1e-5 && (m.rhs - oracle).abs() < 1e-5, "{m:?}");
        }
    }

    #[test]
    fn undamped_moments_of_coherent_state() {
        let coh = gaussian_state(1.0, -0.5, 1.0, 1.0).unwrap();
        let coeffs = oscillator_coefficients(&coh, 64).unwrap();
        for (terms, oracle) in [(vec![(1.0, 2, 0)], 1.5), (vec![(1.0, 1, 1)], -0.5)] {
            let w = weyl_quantize_polynomial(&terms, 64, 1.0, 1e-4).unwrap();
            assert!((w.expectation(&coeffs).unwrap().re - oracle).abs() < 1e-6);
        }
    }

    #[test]
    fn coefficient_tail_is_enforced() {
        let far = gaussian_state(6.0, 6.0, 1.0, 1.0).unwrap();
        assert!(matches!(oscillator_coefficients(&far, 16), Err(Error::Truncation(_))));
        let c = oscillator_coefficients(&oscillator_eigenstate(3, 1.0).unwrap(), 8).unwrap();
        assert!((c[3].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parseval_pairs() {
        let grid = Grid2D::square(8.0, 128).unwrap();
        for n in [0, 1] {
            let f = wigner_transform(&oscillator_eigenstate(n, 1.0).unwrap(), &grid).unwrap();
            for g in [PhaseSpaceFunction::gaussian(1.0, 0.5).unwrap(), PhaseSpaceFunction::named("xp", 0.1).unwrap()] {
                let (lhs, rhs) = parseval_check(&g, &f);
                assert!((rhs - lhs).norm() < 1e-8, "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn named_set_and_csv() {
        assert!(PhaseSpaceFunction::named("cubic", 1e-3).is_err());
        assert!(PhaseSpaceFunction::damped_polynomial("z", &[(1.0, 1, 0)], 0.0).is_err());
        let w = weyl_quantize_auto(&PhaseSpaceFunction::named("x", 1e-3).unwrap(), 4, 1.0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        w.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("row,col,re,im\n"));
        assert_eq!(text.lines().count(), 17);
    }
}
