use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use super::grid::{Grid2D, SampledFunction1D};
use crate::error::{Error, Result};

/// Trapezoid rule over the half-open lattice.
///
/// For integrands that vanish at both ends the closing half-weights are
/// absorbed into the wrap-around sample, so the rule is `dx·Σ f_k`. This is
/// the same sum the discrete transform evaluates at zero frequency.
pub fn quadrature(f: &SampledFunction1D) -> Complex64 {
    f.values.iter().sum::<Complex64>() * f.grid.dx()
}

/// Two-dimensional counterpart of [`quadrature`] for real fields.
pub fn quadrature_2d(values: &Array2<f64>, grid: &Grid2D) -> f64 {
    values.sum() * grid.cell_area()
}

/// `∫ f(x)·2 sin(Tx)/x dx`, the truncation of `∫dx f(x) ∫_{-T}^{T} e^{itx} dt`.
///
/// As `T` grows this tends to `2π·f(0)`, which is how `∫ e^{itx} dt`
/// acts as `2π·δ(x)`.
pub fn delta_kernel_check(f: &SampledFunction1D, cutoff: f64) -> Result<Complex64> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::Precondition(format!("cutoff must be positive, got {cutoff}")));
    }
    let weighted = f.map(|x, v| {
        let kernel = if x == 0.0 { 2.0 * cutoff } else { 2.0 * (cutoff * x).sin() / x };
        v * kernel
    });
    Ok(quadrature(&weighted))
}

/// `2π·f(0)`, the limit of [`delta_kernel_check`].
pub fn delta_limit(f0: Complex64) -> Complex64 {
    f0 * 2.0 * PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Grid1D;

    fn grid() -> Grid1D {
        Grid1D::centered(16.0, 512).unwrap()
    }

    #[test]
    fn gaussian_integral() {
        let f = SampledFunction1D::from_real_fn(grid(), |x| (-x * x).exp());
        assert!((quadrature(&f).re - PI.sqrt()).abs() < 1e-12);
        assert_eq!(quadrature(&SampledFunction1D::zeros(grid())).norm(), 0.0);
    }

    #[test]
    fn ground_state_normalized() {
        let f = SampledFunction1D::from_real_fn(grid(), |x| (-x * x).exp() / PI.sqrt());
        assert!((quadrature(&f).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_kernel_picks_out_origin() {
        let f = SampledFunction1D::from_real_fn(grid(), |x| (-x * x / 2.0).exp());
        let v = delta_kernel_check(&f, 40.0).unwrap();
        assert!((v - delta_limit(Complex64::new(1.0, 0.0))).norm() < 1e-2);

        let odd = SampledFunction1D::from_real_fn(grid(), |x| x * (-x * x / 2.0).exp());
        assert!(delta_kernel_check(&odd, 40.0).unwrap().norm() < 1e-6);

        // scipy quad oracle: 0.06979988382640555
        let shifted = SampledFunction1D::from_real_fn(grid(), |x| (-(x - 3.0).powi(2) / 2.0).exp());
        let v = delta_kernel_check(&shifted, 40.0).unwrap();
        assert!((v.re - 2.0 * PI * (-4.5f64).exp()).abs() < 1e-2);
        assert!((v.re - 0.06979988382640555).abs() < 1e-9);

        assert!(delta_kernel_check(&f, 0.0).is_err());
    }
}
