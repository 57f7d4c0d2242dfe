//! One-dimensional pure states, the position and momentum operators, and
//! the exponential operators `e^{cX}` and `e^{aD}`.
//!
//! Closed-form states are the displaced, boosted and scaled Hermite
//! functions
//!
//! ```text
//! ψ(x) = e^{iφ} e^{i p₀ x/ħ} h_n((x - x₀)/σ) / √σ,
//! ```
//!
//! which covers coherent/squeezed Gaussians (`n = 0`) and oscillator
//! eigenstates (`σ = √ħ`). They can be evaluated at any real `x`, which the
//! Wigner transform needs at `x ± βħ/2`. Sampled states fall back to
//! band-limited (Whittaker) interpolation between lattice points.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{edge_ratio, quadrature, Fourier1D, Grid1D, SampledFunction1D};

/// Default working grid for unit-width states, `[-16, 16)` with 512 points.
pub fn default_grid() -> Grid1D {
    Grid1D { min: -16.0, max: 16.0, n: 512 }
}

/// Values `h_0(u) ..= h_{n}(u)` of the normalized Hermite functions, by the
/// three-term recurrence
/// `h_{k+1} = √(2/(k+1))·u·h_k − √(k/(k+1))·h_{k−1}`.
pub fn hermite_functions(u: f64, n: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(PI.powf(-0.25) * (-u * u / 2.0).exp());
    if n >= 1 {
        h.push(2f64.sqrt() * u * h[0]);
    }
    for k in 1..n {
        let next = (2.0 / (k + 1) as f64).sqrt() * u * h[k] - (k as f64 / (k + 1) as f64).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// Single normalized Hermite function `h_n(u)`.
pub fn hermite_function(n: usize, u: f64) -> f64 {
    // Far outside the classically allowed region the Gaussian factor
    // underflows before the polynomial can overflow; shortcut it.
    if u.abs() > 40.0 + 2.0 * (n as f64).sqrt() {
        return 0.0;
    }
    hermite_functions(u, n)[n]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticState {
    pub level: usize,
    pub center: f64,
    pub momentum: f64,
    pub width: f64,
    /// Global phase φ.
    pub phase: f64,
}

impl AnalyticState {
    fn eval(&self, x: f64, hbar: f64) -> Complex64 {
        let u = (x - self.center) / self.width;
        let amp = hermite_function(self.level, u) / self.width.sqrt();
        Complex64::from_polar(amp, self.phase + self.momentum * x / hbar)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    Analytic(AnalyticState),
    Sampled(SampledFunction1D),
}

/// A unit-norm state together with the value of ħ it lives in.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    repr: Representation,
    hbar: f64,
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar > 0.0 && hbar.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("hbar must be positive, got {hbar}")))
    }
}

/// `(πσ²)^{-1/4} exp(−(x−x₀)²/(2σ²) + i p₀ x/ħ)`.
pub fn gaussian_state(x0: f64, p0: f64, sigma: f64, hbar: f64) -> Result<WaveFunction> {
    check_hbar(hbar)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Precondition(format!("sigma must be positive, got {sigma}")));
    }
    if !(x0.is_finite() && p0.is_finite()) {
        return Err(Error::NonFinite("gaussian_state parameters"));
    }
    Ok(WaveFunction {
        repr: Representation::Analytic(AnalyticState { level: 0, center: x0, momentum: p0, width: sigma, phase: 0.0 }),
        hbar,
    })
}

/// n-th eigenstate of `(X² + P²)/2`, i.e. the Hermite function of width `√ħ`.
pub fn oscillator_eigenstate(n: usize, hbar: f64) -> Result<WaveFunction> {
    check_hbar(hbar)?;
    Ok(WaveFunction {
        repr: Representation::Analytic(AnalyticState {
            level: n,
            center: 0.0,
            momentum: 0.0,
            width: hbar.sqrt(),
            phase: 0.0,
        }),
        hbar,
    })
}

impl WaveFunction {
    /// Wraps samples as a state, normalizing them.
    pub fn sampled(f: SampledFunction1D, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        let norm2 = quadrature(&f.map(|_, v| Complex64::new(v.norm_sqr(), 0.0))).re;
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::Precondition("sampled state has zero or non-finite norm".into()));
        }
        let r = edge_ratio(&f.values, |v| v.norm());
        if r > 1e-8 {
            return Err(Error::Decay { what: "sampled state", ratio: r });
        }
        let scale = 1.0 / norm2.sqrt();
        Ok(Self { repr: Representation::Sampled(f.map(|_, v| v * scale)), hbar })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    /// `ψ(x)` at an arbitrary real point.
    pub fn eval(&self, x: f64) -> Complex64 {
        match &self.repr {
            Representation::Analytic(a) => a.eval(x, self.hbar),
            Representation::Sampled(f) => whittaker(f, x),
        }
    }

    pub fn sample(&self, grid: &Grid1D) -> SampledFunction1D {
        if let Representation::Sampled(f) = &self.repr {
            if f.grid.approx_eq(grid) {
                return f.clone();
            }
        }
        SampledFunction1D::from_fn(*grid, |x| self.eval(x))
    }

    /// Mean position and spatial scale of the state.
    fn extent(&self) -> (f64, f64, f64, f64) {
        match &self.repr {
            Representation::Analytic(a) => {
                let spread = (2.0 * a.level as f64 + 1.0).sqrt();
                (a.center, a.width * spread, a.momentum, self.hbar / a.width * spread)
            }
            Representation::Sampled(f) => {
                let c = 0.5 * (f.grid.min + f.grid.max);
                let half = 0.5 * (f.grid.max - f.grid.min);
                (c, half / 8.0, 0.0, self.hbar * f.grid.dual().max / 8.0)
            }
        }
    }

    /// Position lattice on which the state and its products with shifted
    /// copies can be integrated accurately.
    pub fn support_grid(&self) -> Grid1D {
        match &self.repr {
            Representation::Sampled(f) => f.grid,
            Representation::Analytic(a) => {
                let spread = (2.0 * a.level as f64 + 1.0).sqrt();
                let half = a.width * (12.0 + 2.0 * spread);
                Grid1D { min: a.center - half, max: a.center + half, n: 1024 }
            }
        }
    }

    /// Phase-space lattice with `n²` points that contains the Wigner
    /// function of the state.
    pub fn phase_space_grid(&self, n: usize) -> Result<crate::numerics::Grid2D> {
        let (x0, sx, p0, sp) = self.extent();
        let gx = Grid1D::around(x0, 2.0 * (7.0 * sx.max(1e-3) + 2.0) / n as f64, n)?;
        let gp = Grid1D::around(p0, 2.0 * (7.0 * sp.max(1e-3) + 2.0) / n as f64, n)?;
        Ok(crate::numerics::Grid2D::new(gx, gp))
    }
}

/// Band-limited reconstruction `Σ ψ_k sinc((x − x_k)/dx)`.
fn whittaker(f: &SampledFunction1D, x: f64) -> Complex64 {
    let t = f.grid.index_of(x);
    let nearest = t.round();
    if (t - nearest).abs() < 1e-12 {
        let k = nearest as isize;
        return if k >= 0 && (k as usize) < f.grid.n { f.values[k as usize] } else { Complex64::new(0.0, 0.0) };
    }
    // sin(π(t−k)) = (−1)^k sin(πt)
    let s = (PI * t).sin();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, v) in f.values.iter().enumerate() {
        let d = t - k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += v * (sign * s / (PI * d));
    }
    acc
}

/// `(Xψ)(x) = x·ψ(x)`.
pub fn apply_x(psi: &SampledFunction1D) -> SampledFunction1D {
    psi.map(|x, v| v * x)
}

/// `(Pψ)(x) = −iħ ψ′(x)`, differentiating spectrally.
pub fn apply_p(psi: &SampledFunction1D, hbar: f64) -> Result<SampledFunction1D> {
    let r = edge_ratio(&psi.values, |v| v.norm());
    if r > 1e-8 {
        return Err(Error::Decay { what: "apply_p input", ratio: r });
    }
    let plan = Fourier1D::new(psi.grid);
    let mut buf = psi.values.clone();
    plan.forward_in_place(&mut buf);
    let spectral = edge_ratio(&buf, |v| v.norm());
    if spectral > 1e-8 {
        return Err(Error::Decay { what: "apply_p spectrum (grid too coarse)", ratio: spectral });
    }
    // −iħ·(iξ) = ħξ
    for (v, xi) in buf.iter_mut().zip(plan.dual().points()) {
        *v *= hbar * xi;
    }
    plan.inverse_in_place(&mut buf);
    SampledFunction1D::new(psi.grid, buf)
}

/// `ψ(x) ↦ ψ(x + a)`, the action of `e^{aD}`.
pub fn shift(psi: &WaveFunction, a: f64) -> Result<WaveFunction> {
    if !a.is_finite() {
        return Err(Error::NonFinite("shift"));
    }
    let repr = match &psi.repr {
        Representation::Analytic(s) => Representation::Analytic(AnalyticState {
            center: s.center - a,
            phase: s.phase + s.momentum * a / psi.hbar,
            ..*s
        }),
        Representation::Sampled(f) => {
            let plan = Fourier1D::new(f.grid);
            let mut buf = f.values.clone();
            plan.forward_in_place(&mut buf);
            for (v, xi) in buf.iter_mut().zip(plan.dual().points()) {
                *v *= Complex64::cis(xi * a);
            }
            plan.inverse_in_place(&mut buf);
            Representation::Sampled(SampledFunction1D::new(f.grid, buf)?)
        }
    };
    Ok(WaveFunction { repr, hbar: psi.hbar })
}

/// `ψ(x) ↦ e^{cx}·ψ(x)` on `grid`. The result is not renormalized.
pub fn exp_x_multiply(psi: &WaveFunction, c: f64, grid: &Grid1D) -> Result<SampledFunction1D> {
    let out = SampledFunction1D::from_fn(*grid, |x| psi.eval(x) * (c * x).exp());
    if out.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("e^{cX}ψ overflowed on the grid"));
    }
    let r = edge_ratio(&out.values, |v| v.norm());
    if r > 1e-8 {
        return Err(Error::Decay { what: "e^{cX}ψ", ratio: r });
    }
    Ok(out)
}

/// `∫ φ*(x) ψ(x) dx`.
pub fn inner_product(phi: &SampledFunction1D, psi: &SampledFunction1D) -> Result<Complex64> {
    if !phi.grid.approx_eq(&psi.grid) {
        return Err(Error::GridMismatch("inner_product operands live on different grids".into()));
    }
    let prod = SampledFunction1D {
        grid: psi.grid,
        values: phi.values.iter().zip(&psi.values).map(|(a, b)| a.conj() * b).collect(),
    };
    Ok(quadrature(&prod))
}

/// `⟨ψ|O|ψ⟩` for an operator given by its action on samples.
pub fn expectation(
    psi: &SampledFunction1D,
    op: impl Fn(&SampledFunction1D) -> Result<SampledFunction1D>,
) -> Result<Complex64> {
    inner_product(psi, &op(psi)?)
}

/// Real expectation of a Hermitian operator; rejects an imaginary part
/// above `1e-8`.
pub fn hermitian_expectation(
    psi: &SampledFunction1D,
    op: impl Fn(&SampledFunction1D) -> Result<SampledFunction1D>,
) -> Result<f64> {
    let v = expectation(psi, op)?;
    if v.im.abs() > 1e-8 * v.re.abs().max(1.0) {
        return Err(Error::Precondition(format!("expectation has imaginary part {:e}", v.im)));
    }
    Ok(v.re)
}

/// Momentum-space amplitude `ψ̃(p) = (1/√(2πħ)) ∫ ψ(x) e^{−ipx/ħ} dx` by
/// direct quadrature on the state's support grid.
pub fn momentum_amplitude(psi: &WaveFunction, p: f64) -> Complex64 {
    let grid = psi.support_grid();
    let hbar = psi.hbar;
    let f = SampledFunction1D::from_fn(grid, |x| psi.eval(x) * Complex64::cis(-p * x / hbar));
    quadrature(&f) / (2.0 * PI * hbar).sqrt()
}

/// Coefficients `a, b` of the observable `Z = aX + bP`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionAB {
    pub a: f64,
    pub b: f64,
}

impl DirectionAB {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::NonFinite("direction"));
        }
        if a == 0.0 && b == 0.0 {
            return Err(Error::Precondition("a and b must not both be zero".into()));
        }
        Ok(Self { a, b })
    }

    /// Unit direction `(cos θ, sin θ)`.
    pub fn from_angle(theta: f64) -> Self {
        Self { a: theta.cos(), b: theta.sin() }
    }

    pub fn norm(&self) -> f64 {
        self.a.hypot(self.b)
    }

    /// Unit representative with `a > 0`, or `(0, 1)` when `a = 0`, plus the
    /// signed factor `λ` with `self = λ·canonical`.
    pub fn canonical(&self) -> (DirectionAB, f64) {
        let r = self.norm();
        let flip = self.a < 0.0 || (self.a == 0.0 && self.b < 0.0);
        let s = if flip { -r } else { r };
        (DirectionAB { a: self.a / s, b: self.b / s }, s)
    }

    /// Angle `θ ∈ [0, π)` and signed radius `r` with
    /// `self = r·(cos θ, sin θ)`.
    pub fn half_circle_angle(&self) -> (f64, f64) {
        let r = self.norm();
        let mut theta = self.b.atan2(self.a);
        let mut sign = 1.0;
        if theta < 0.0 {
            theta += PI;
            sign = -1.0;
        }
        if theta >= PI {
            theta -= PI;
            sign = -sign;
        }
        (theta, sign * r)
    }
}

/// Parsed form of the state mini-grammar `gaussian:x0,p0,sigma`,
/// `hermite:n`, `file:PATH`.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Gaussian { x0: f64, p0: f64, sigma: f64 },
    Hermite { n: usize },
    File(PathBuf),
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) =
            s.split_once(':').ok_or_else(|| Error::Parse(format!("state `{s}` must look like kind:args")))?;
        let nums = |want: usize| -> Result<Vec<f64>> {
            let v: std::result::Result<Vec<f64>, _> = rest.split(',').map(|t| t.trim().parse::<f64>()).collect();
            let v = v.map_err(|e| Error::Parse(format!("`{rest}`: {e}")))?;
            if v.len() != want {
                return Err(Error::Parse(format!("`{kind}` takes {want} numbers, got {}", v.len())));
            }
            Ok(v)
        };
        match kind.trim() {
            "gaussian" => {
                let v = nums(3)?;
                Ok(StateSpec::Gaussian { x0: v[0], p0: v[1], sigma: v[2] })
            }
            "hermite" => {
                let n = rest.trim().parse().map_err(|e| Error::Parse(format!("hermite level `{rest}`: {e}")))?;
                Ok(StateSpec::Hermite { n })
            }
            "file" if !rest.is_empty() => Ok(StateSpec::File(PathBuf::from(rest))),
            other => Err(Error::Parse(format!("unknown state kind `{other}`"))),
        }
    }
}

impl StateSpec {
    pub fn build(&self, hbar: f64) -> Result<WaveFunction> {
        match self {
            StateSpec::Gaussian { x0, p0, sigma } => gaussian_state(*x0, *p0, *sigma, hbar),
            StateSpec::Hermite { n } => oscillator_eigenstate(*n, hbar),
            StateSpec::File(path) => {
                let (f, _) = crate::numerics::io::read_sampled(path)?;
                WaveFunction::sampled(f, hbar)
            }
        }
    }
}
