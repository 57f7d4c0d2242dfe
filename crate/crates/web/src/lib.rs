//! Browser bindings: Wigner heatmaps, marginal curves and the spin window.

use phasespace::numerics::Grid2D;
use phasespace::spin::{self, SpinState};
use phasespace::states::{DirectionAB, StateSpec};
use phasespace::tomography::{marginal_of_quasi, projection_grid, quantum_marginal};
use phasespace::wigner::wigner_transform;
use phasespace::Result;
use wasm_bindgen::prelude::*;

fn js(e: phasespace::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Wigner function on `[-half, half)²` with `n` points per axis, row `i` at `x_i`.
pub fn heatmap(state: &str, hbar: f64, half: f64, n: usize) -> Result<Vec<f64>> {
    let psi = state.parse::<StateSpec>()?.build(hbar)?;
    let f = wigner_transform(&psi, &Grid2D::square(half, n)?)?;
    Ok(f.values.iter().copied().collect())
}

/// `z`, the marginal of the Wigner function and the measured marginal along
/// angle `theta`, concatenated.
pub fn marginals(state: &str, hbar: f64, half: f64, n: usize, theta: f64) -> Result<Vec<f64>> {
    let psi = state.parse::<StateSpec>()?.build(hbar)?;
    let f = wigner_transform(&psi, &Grid2D::square(half, n)?)?;
    let d = DirectionAB::from_angle(theta);
    let z = projection_grid(&f.grid, d)?;
    let quasi = marginal_of_quasi(&f, d, &z)?;
    let measured = quantum_marginal(&psi, d, &z)?;
    let mut out: Vec<f64> = z.points().collect();
    out.extend(&quasi.values);
    out.extend(&measured.values);
    Ok(out)
}

/// `[⟨Z⟩, ⟨X⟩, ⟨Y⟩, t_lo, t_hi, f₊₊, f₊₋, f₋₊, f₋₋]` for the Bloch state at
/// polar angle `theta` and azimuth `phi`.
pub fn spin_summary(theta: f64, phi: f64, t: f64) -> Result<Vec<f64>> {
    let e = spin::expectations(&SpinState::from_bloch(theta, phi))?;
    let (lo, hi) = spin::nonneg_window(e.z, e.x)?;
    let f = spin::quasi_family(e.z, e.x, t)?;
    let mut out = vec![e.z, e.x, e.y, lo, hi];
    out.extend(f.components());
    Ok(out)
}

#[wasm_bindgen]
pub fn wigner_heatmap(state: &str, hbar: f64, half: f64, n: usize) -> std::result::Result<Vec<f64>, JsError> {
    heatmap(state, hbar, half, n).map_err(js)
}

#[wasm_bindgen]
pub fn marginal_curves(
    state: &str,
    hbar: f64,
    half: f64,
    n: usize,
    theta: f64,
) -> std::result::Result<Vec<f64>, JsError> {
    marginals(state, hbar, half, n, theta).map_err(js)
}

#[wasm_bindgen]
pub fn spin_window(theta: f64, phi: f64, t: f64) -> std::result::Result<Vec<f64>, JsError> {
    spin_summary(theta, phi, t).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn heatmap_is_row_major_in_x() {
        let v = heatmap("gaussian:1,0,1", 1.0, 6.0, 64).unwrap();
        assert_eq!(v.len(), 64 * 64);
        let (i, _) = v.iter().enumerate().fold((0, f64::MIN), |b, (k, &x)| if x > b.1 { (k, x) } else { b });
        assert_eq!((i / 64, i % 64), (32 + 5, 32));
    }

    #[test]
    fn marginal_curves_agree() {
        let v = marginals("hermite:1", 1.0, 6.0, 128, 0.6).unwrap();
        let m = v.len() / 3;
        assert_eq!(v.len(), 3 * m);
        let gap = (0..m).map(|k| (v[m + k] - v[2 * m + k]).abs()).fold(0.0, f64::max);
        assert!(gap < 1e-6, "{gap}");
    }

    #[test]
    fn spin_summary_of_tilted_state() {
        let s = spin_summary(PI / 4.0, 0.0, 0.0).unwrap();
        assert!((s[0] - s[1]).abs() < 1e-15 && s[2].abs() < 1e-15);
        assert!(s[3] > 0.0 && s[3] <= s[4]);
        assert!(s[8] < 0.0);
        assert!(spin_summary(PI / 4.0, 0.0, s[3]).unwrap()[5..].iter().all(|&v| v >= -1e-15));
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(heatmap("hermite:z", 1.0, 6.0, 64).is_err());
        assert!(marginals("hermite:0", 1.0, 6.0, 8, 0.0).is_err());
    }
}
