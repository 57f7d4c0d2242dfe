//! Self-check suite: the library's invariants evaluated on the standard
//! test states, one named check per property.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::numerics::{Grid1D, Grid2D};
use crate::spin;
use crate::states::{gaussian_state, oscillator_eigenstate, DirectionAB};
use crate::tomography::{
    find_violated_direction, half_circle, marginal_of_quasi, projection_grid, quantum_marginal,
    reconstruct_from_marginals, rectangle_modification, smooth_modification, verify_j2m, Marginal,
};
use crate::weyl::{
    moyal_expectation_check, oscillator_coefficients, oscillator_matrices, weyl_quantize_auto,
    weyl_quantize_polynomial, DisplacementBasis, PhaseSpaceFunction, DEFAULT_EPSILON,
};
use crate::wigner::{
    characteristic_function, characteristic_grid, wigner_from_characteristic, wigner_transform, NegativeVolume,
    QuasiDistribution,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Passes when `value < threshold`.
    Below,
    /// Passes when `value > threshold`.
    Above,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub bound: Bound,
    pub passed: bool,
    #[serde(skip_serializing)]
    pub seconds: f64,
}

/// Threshold overrides: a global value for every `Below` check, and named
/// per-check values that take precedence.
#[derive(Clone, Debug, Default)]
pub struct Tolerances {
    pub global: Option<f64>,
    pub named: BTreeMap<String, f64>,
}

impl Tolerances {
    pub fn resolve(&self, name: &str, bound: Bound, default: f64) -> f64 {
        if let Some(v) = self.named.get(name) {
            return *v;
        }
        match (bound, self.global) {
            (Bound::Below, Some(v)) => v,
            _ => default,
        }
    }
}

struct Runner<'a> {
    tol: &'a Tolerances,
    checks: Vec<Check>,
}

impl Runner<'_> {
    fn run(&mut self, name: &str, bound: Bound, default: f64, f: impl FnOnce() -> Result<f64>) {
        let start = Instant::now();
        let threshold = self.tol.resolve(name, bound, default);
        let value = f().unwrap_or_else(|e| {
            log::error!("{name}: {e}");
            f64::NAN
        });
        let passed = match bound {
            Bound::Below => value < threshold,
            Bound::Above => value > threshold,
        };
        log::info!("{name}: {value:e} ({})", if passed { "pass" } else { "FAIL" });
        self.checks.push(Check {
            name: name.into(),
            value,
            threshold,
            bound,
            passed,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
}

fn max_over<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> Result<f64>) -> Result<f64> {
    let mut m = 0.0f64;
    for item in items {
        m = m.max(f(item)?);
    }
    Ok(m)
}

/// Runs every check at Planck constant `hbar`.
pub fn run_suite(hbar: f64, tol: &Tolerances) -> Vec<Check> {
    let mut r = Runner { tol, checks: Vec::new() };
    let s = hbar.sqrt();
    let psi0 = || oscillator_eigenstate(0, hbar);
    let psi1 = || oscillator_eigenstate(1, hbar);
    let coherent = || gaussian_state(2.0 * s, 3.0 * s, s, hbar);
    let square = |half: f64, n: usize| Grid2D::square(half * s, n);

    r.run("wigner.ground_state_closed_form", Bound::Below, 1e-7, || {
        let grid = square(6.0, 256)?;
        let f = wigner_transform(&psi0()?, &grid)?;
        let exact = QuasiDistribution::from_fn(grid, hbar, |x, p| (-(x * x + p * p) / hbar).exp() / (PI * hbar));
        f.max_abs_diff(&exact)
    });
    r.run("wigner.normalization", Bound::Below, 1e-8, || {
        max_over([psi0()?, psi1()?, coherent()?], |psi| {
            Ok((wigner_transform(&psi, &psi.phase_space_grid(256)?)?.integral() - 1.0).abs())
        })
    });
    r.run("wigner.bound_excess", Bound::Below, 1e-8, || {
        max_over([psi0()?, psi1()?, oscillator_eigenstate(4, hbar)?], |psi| {
            Ok(wigner_transform(&psi, &psi.phase_space_grid(256)?)?.invariants().bound_excess.max(0.0))
        })
    });
    r.run("wigner.route_equivalence", Bound::Below, 1e-7, || {
        let grid = square(8.0, 256)?;
        max_over([psi0()?, psi1()?], |psi| {
            let a = wigner_from_characteristic(&characteristic_grid(&psi, &grid)?)?;
            a.max_abs_diff(&wigner_transform(&psi, &grid)?)
        })
    });
    r.run("wigner.first_excited_origin", Bound::Below, 1e-6, || {
        let grid = square(6.0, 256)?;
        let f = wigner_transform(&psi1()?, &grid)?;
        Ok((f.values[[128, 128]] + 1.0 / (PI * hbar)).abs())
    });
    r.run("wigner.first_excited_negative_volume", Bound::Above, 0.0, || {
        Ok(wigner_transform(&psi1()?, &square(6.0, 256)?)?.negative_volume())
    });
    r.run("wigner.discrete_negative_volume", Bound::Below, 1e-15, || {
        Ok(([0.6, -0.1, 0.3, 0.2][..].negative_volume() - 0.1).abs())
    });

    r.run("charfn.ground_state_probe", Bound::Below, 1e-8, || {
        let psi = psi0()?;
        let mut m = 0.0f64;
        for i in 0..9 {
            for j in 0..9 {
                let (a, b) = ((i as f64 - 4.0) * 0.5 / s, (j as f64 - 4.0) * 0.5 / s);
                let exact = (-hbar * (a * a + b * b) / 4.0).exp();
                m = m.max((characteristic_function(&psi, a, b)? - exact).norm());
            }
        }
        Ok(m)
    });
    r.run("charfn.matrix_route", Bound::Below, 1e-6, || {
        let psi = coherent()?;
        let coeffs = oscillator_coefficients(&psi, 64)?;
        let basis = DisplacementBasis::new(64, hbar)?;
        let mut m = 0.0f64;
        for i in 0..5 {
            for j in 0..5 {
                let (a, b) = ((i as f64 - 2.0) * 0.5 / s, (j as f64 - 2.0) * 0.5 / s);
                let lhs = basis.displacement(-a, -b).expectation(&coeffs)?;
                m = m.max((lhs - characteristic_function(&psi, a, b)?).norm());
            }
        }
        Ok(m)
    });

    r.run("tomography.j2m", Bound::Below, 1e-6, || {
        let grid = square(7.0, 128)?;
        let bump = QuasiDistribution::from_fn(grid, hbar, |x, p| {
            (-(x / s - 0.5).powi(2) / 0.8 - (p / s + 0.3).powi(2) / 1.7).exp() / (PI * hbar * (0.8f64 * 1.7).sqrt())
        });
        let f1 = wigner_transform(&psi1()?, &grid)?;
        let smooth = smooth_modification(&f1, 1.0 / hbar, 1.0 / hbar, 0.1 / hbar)?;
        let pairs = [(&bump, (1.0, 0.0)), (&bump, (0.3, -2.0)), (&f1, (0.6, 0.8)), (&smooth, (-1.0, 1.0))];
        max_over(pairs, |(f, (a, b))| verify_j2m(f, DirectionAB::new(a, b)?))
    });
    r.run("tomography.forward", Bound::Below, 1e-6, || {
        max_over([psi0()?, psi1()?, coherent()?], |psi| {
            let f = wigner_transform(&psi, &psi.phase_space_grid(256)?)?;
            Ok(find_violated_direction(&f, &psi, &half_circle(8))?.residual)
        })
    });
    r.run("tomography.marginal_normalization", Bound::Below, 1e-7, || {
        let psi = coherent()?;
        let f = wigner_transform(&psi, &psi.phase_space_grid(256)?)?;
        max_over(half_circle(5), |t| {
            let d = DirectionAB::from_angle(t);
            Ok((marginal_of_quasi(&f, d, &projection_grid(&f.grid, d)?)?.normalization() - 1.0).abs())
        })
    });
    r.run("tomography.reconstruction_l2", Bound::Below, 1e-3, || {
        let grid = square(6.0, 128)?;
        let psi = psi0()?;
        let marginals = half_circle(64)
            .into_iter()
            .map(|t| {
                let d = DirectionAB::from_angle(t);
                quantum_marginal(&psi, d, &projection_grid(&grid, d)?)
            })
            .collect::<Result<Vec<Marginal>>>()?;
        reconstruct_from_marginals(&marginals, &grid, hbar)?.l2_distance(&wigner_transform(&psi, &grid)?)
    });
    let thetas = [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0];
    let tampered = |kind: &str| -> Result<QuasiDistribution> {
        let f = wigner_transform(&psi0()?, &square(6.0, 128)?)?;
        match kind {
            "rect" => rectangle_modification(&f, s, s, 0.05 / hbar),
            _ => smooth_modification(&f, 1.0 / hbar, 1.0 / hbar, 0.1 / hbar),
        }
    };
    for kind in ["rect", "smooth"] {
        r.run(&format!("tomography.{kind}_axis_marginals"), Bound::Below, 1e-9, || {
            let scan = find_violated_direction(&tampered(kind)?, &psi0()?, &thetas)?;
            Ok(scan.residuals[0].1.max(scan.residuals[2].1))
        });
        r.run(&format!("tomography.{kind}_detected"), Bound::Above, 1e-3, || {
            Ok(find_violated_direction(&tampered(kind)?, &psi0()?, &thetas)?.residual)
        });
    }

    r.run("weyl.hermitian", Bound::Below, 1e-8, || {
        max_over(["xp", "x2p2", "gauss"], |name| {
            Ok(weyl_quantize_auto(&PhaseSpaceFunction::named(name, DEFAULT_EPSILON)?, 32, hbar)?.hermiticity_residual())
        })
    });
    r.run("weyl.symmetric_ordering", Bound::Below, 1e-6, || {
        let (x, p) = oscillator_matrices(32, hbar)?;
        let target = (&x.entries * &p.entries + &p.entries * &x.entries) * Complex64::new(0.5, 0.0);
        Ok(weyl_quantize_polynomial(&[(1.0, 1, 1)], 32, hbar, 1e-4)?.block_diff(&target, 16))
    });
    r.run("weyl.moyal", Bound::Below, 1e-4, || {
        let states = [psi0()?, psi1()?, coherent()?, gaussian_state(s, -0.5 * s, s, hbar)?];
        let mut m = 0.0f64;
        for name in ["x", "p", "x2", "p2", "xp", "gauss"] {
            let g = PhaseSpaceFunction::named(name, DEFAULT_EPSILON)?;
            for psi in &states {
                m = m.max(moyal_expectation_check(&g, psi, 64)?.diff);
            }
        }
        Ok(m)
    });

    r.run("spin.family_identity", Bound::Below, 1e-12, || {
        let mut m = 0.0f64;
        for k in 0..20 {
            let st = spin::SpinState::from_bloch(0.37 * k as f64 % PI, 1.3 * k as f64);
            let e = spin::expectations(&st)?;
            let f = spin::feynman_choice(&st)?;
            let sum = (f.components().iter().sum::<f64>() - 1.0).abs();
            m = spin::marginal_residuals(&f, e.z, e.x).iter().fold(m.max(sum), |a, v| a.max(v.abs()));
        }
        Ok(m)
    });
    r.run("spin.window_nonempty", Bound::Below, 0.5, || {
        let mut empty = 0usize;
        let g = Grid1D::new(-1.0, 1.02, 101)?;
        for z in g.points() {
            for x in g.points() {
                let (lo, hi) = spin::nonneg_window(z.min(1.0), x.min(1.0))?;
                empty += usize::from(lo > hi);
            }
        }
        Ok(empty as f64)
    });
    r.run("spin.feynman_negativity", Bound::Above, 0.0, || {
        let st = spin::SpinState::new(Complex64::new((PI / 8.0).cos(), 0.0), Complex64::new((PI / 8.0).sin(), 0.0))?;
        let f = spin::feynman_choice(&st)?;
        let ok = spin::feynman_choice_with(&st, spin::TChoice::Value(0.7))?.is_nonnegative();
        Ok(if ok { -f.fmm } else { f64::NAN })
    });
    r.run("spin.zx_mismatch", Bound::Above, 0.5, || {
        let f = spin::quasi_family(0.2, -0.3, 0.1)?;
        Ok(f64::from(u8::from(spin::zx_sum_spectrum_report(&f).mismatch)))
    });
    r.checks
}
