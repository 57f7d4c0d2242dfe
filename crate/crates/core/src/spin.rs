//! Spin-½ quasi-probabilities `f_{±±}` for the joint values of `Z` and `X`
//! (Pauli matrices as observables, spin in units of ħ/2).
//!
//! Matching the four single-observable marginals leaves a one-parameter
//! family `f_{sz,sx} = ¼(1 + sz⟨Z⟩ + sx⟨X⟩ + sz·sx·t)`.

use std::str::FromStr;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Slack for sign tests at the closed ends of the nonnegativity window.
pub const NONNEG_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpinState {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl SpinState {
    pub fn new(c0: Complex64, c1: Complex64) -> Result<Self> {
        let norm = c0.norm_sqr() + c1.norm_sqr();
        if !norm.is_finite() {
            return Err(Error::NonFinite("spin amplitudes"));
        }
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!("spin state has norm² {norm}, expected 1")));
        }
        Ok(Self { c0, c1 })
    }

    /// Rescales nonzero amplitudes to unit norm.
    pub fn normalized(c0: Complex64, c1: Complex64) -> Result<Self> {
        let n = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Precondition("spin amplitudes must not both vanish".into()));
        }
        Self::new(c0 / n, c1 / n)
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        Self { c0: Complex64::new((theta / 2.0).cos(), 0.0), c1: Complex64::from_polar((theta / 2.0).sin(), phi) }
    }

    fn ket(&self) -> nalgebra::Vector2<Complex64> {
        nalgebra::Vector2::new(self.c0, self.c1)
    }
}

/// `c0,c1` with complex entries such as `0.6`, `0.8i` or `0.5+0.5i`.
impl FromStr for SpinState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!("expected 'c0,c1', got '{s}'")));
        }
        let parse = |t: &str| Complex64::from_str(t).map_err(|_| Error::Parse(format!("bad amplitude '{t}'")));
        Self::normalized(parse(parts[0])?, parse(parts[1])?)
    }
}

pub type Pauli = Matrix2<Complex64>;

/// `(X, Y, Z)`.
pub fn pauli() -> (Pauli, Pauli, Pauli) {
    let (o, l, i) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
    (Matrix2::new(o, l, l, o), Matrix2::new(o, -i, i, o), Matrix2::new(l, o, o, -l))
}

/// Eigenvalues of a Hermitian 2×2 matrix, ascending.
pub fn hermitian_eigenvalues(m: &Pauli) -> [f64; 2] {
    let tr = (m[(0, 0)] + m[(1, 1)]).re;
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    [tr / 2.0 - disc, tr / 2.0 + disc]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Expectations {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub fn expectations(state: &SpinState) -> Result<Expectations> {
    let s = SpinState::new(state.c0, state.c1)?;
    let ket = s.ket();
    let (x, y, z) = pauli();
    let ev = |m: &Pauli| (ket.adjoint() * m * ket)[(0, 0)].re;
    Ok(Expectations { x: ev(&x), y: ev(&y), z: ev(&z) })
}

/// `f_{++}, f_{+−}, f_{−+}, f_{−−}`, first index the sign of `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpinQuasiDist {
    pub fpp: f64,
    pub fpm: f64,
    pub fmp: f64,
    pub fmm: f64,
    pub t: f64,
    pub exp_z: f64,
    pub exp_x: f64,
}

impl SpinQuasiDist {
    pub fn components(&self) -> [f64; 4] {
        [self.fpp, self.fpm, self.fmp, self.fmm]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.components().iter().all(|&v| v >= -NONNEG_TOL)
    }
}

fn check_range(z: f64, x: f64) -> Result<()> {
    if !(z.abs() <= 1.0 && x.abs() <= 1.0) {
        return Err(Error::Precondition(format!("expectations must lie in [−1, 1], got ⟨Z⟩ = {z}, ⟨X⟩ = {x}")));
    }
    Ok(())
}

pub fn quasi_family(exp_z: f64, exp_x: f64, t: f64) -> Result<SpinQuasiDist> {
    check_range(exp_z, exp_x)?;
    if !t.is_finite() {
        return Err(Error::NonFinite("t"));
    }
    Ok(SpinQuasiDist {
        fpp: 0.25 * (1.0 + exp_z + exp_x + t),
        fpm: 0.25 * (1.0 + exp_z - exp_x - t),
        fmp: 0.25 * (1.0 - exp_z + exp_x - t),
        fmm: 0.25 * (1.0 - exp_z - exp_x + t),
        t,
        exp_z,
        exp_x,
    })
}

/// Choice of the free parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum TChoice {
    /// `t = ⟨Y⟩`.
    Feynman,
    /// `t = −⟨Y⟩`.
    NegFeynman,
    Value(f64),
}

impl FromStr for TChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "feynman" => Ok(Self::Feynman),
            "neg-feynman" => Ok(Self::NegFeynman),
            v => v.parse().map(Self::Value).map_err(|_| Error::Parse(format!("bad t '{v}'"))),
        }
    }
}

pub fn feynman_choice(state: &SpinState) -> Result<SpinQuasiDist> {
    feynman_choice_with(state, TChoice::Feynman)
}

pub fn feynman_choice_with(state: &SpinState, choice: TChoice) -> Result<SpinQuasiDist> {
    let e = expectations(state)?;
    let t = match choice {
        TChoice::Feynman => e.y,
        TChoice::NegFeynman => -e.y,
        TChoice::Value(v) => v,
    };
    quasi_family(e.z, e.x, t)
}

/// Closed interval of `t` for which every component is nonnegative:
/// `max(−1−⟨Z⟩−⟨X⟩, −1+⟨Z⟩+⟨X⟩) ≤ t ≤ min(1+⟨Z⟩−⟨X⟩, 1−⟨Z⟩+⟨X⟩)`.
pub fn nonneg_window(exp_z: f64, exp_x: f64) -> Result<(f64, f64)> {
    check_range(exp_z, exp_x)?;
    let lo = -1.0 + (exp_z + exp_x).abs();
    let hi = 1.0 - (exp_z - exp_x).abs();
    // on the boundary of the square the ends coincide; rounding may cross them
    if lo > hi {
        let mid = 0.5 * (lo + hi);
        return Ok((mid, mid));
    }
    Ok((lo, hi))
}

/// Residuals of the four marginal equations for `Z` and `X`.
pub fn marginal_residuals(f: &SpinQuasiDist, exp_z: f64, exp_x: f64) -> [f64; 4] {
    [
        f.fpp + f.fpm - 0.5 * (1.0 + exp_z),
        f.fmp + f.fmm - 0.5 * (1.0 - exp_z),
        f.fpp + f.fmp - 0.5 * (1.0 + exp_x),
        f.fpm + f.fmm - 0.5 * (1.0 - exp_x),
    ]
}

/// Values of `aZ + bX` under the quasi-distribution against its spectrum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub a: f64,
    pub b: f64,
    /// `(value, weight)` pairs, equal values merged.
    pub quasi_support: Vec<(f64, f64)>,
    pub eigenvalues: [f64; 2],
    /// No eigenvalue coincides with a quasi value.
    pub mismatch: bool,
}

pub fn combination_spectrum_report(f: &SpinQuasiDist, a: f64, b: f64) -> SpectrumReport {
    let raw = [(a + b, f.fpp), (a - b, f.fpm), (-a + b, f.fmp), (-a - b, f.fmm)];
    let mut support: Vec<(f64, f64)> = Vec::new();
    for (v, w) in raw {
        match support.iter_mut().find(|(u, _)| (u - v).abs() < 1e-12) {
            Some(entry) => entry.1 += w,
            None => support.push((v, w)),
        }
    }
    support.sort_by(|x, y| y.0.total_cmp(&x.0));
    let (x, _, z) = pauli();
    let m = z * Complex64::new(a, 0.0) + x * Complex64::new(b, 0.0);
    let eigenvalues = hermitian_eigenvalues(&m);
    let mismatch = eigenvalues.iter().all(|e| support.iter().all(|(v, _)| (e - v).abs() > 1e-12));
    SpectrumReport { a, b, quasi_support: support, eigenvalues, mismatch }
}

/// The `Z + X` case.
pub fn zx_sum_spectrum_report(f: &SpinQuasiDist) -> SpectrumReport {
    combination_spectrum_report(f, 1.0, 1.0)
}
