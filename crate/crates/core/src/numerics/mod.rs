//! Uniform grids, unitary Fourier transforms, quadrature and interpolation.

mod fourier;
mod grid;
pub mod interp;
pub mod io;
mod quadrature;

pub use fourier::{
    fourier_forward_1d, fourier_forward_2d, fourier_inverse_1d, fourier_inverse_2d, Fourier1D, Fourier2D,
};
pub use grid::{Grid1D, Grid2D, SampledFunction1D, SampledFunction2D};
pub use quadrature::{delta_kernel_check, delta_limit, quadrature, quadrature_2d};

/// Ratio `max(|edge values|) / max(|values|)` of a sampled field.
///
/// Returns `0.0` for an identically zero slice.
pub fn edge_ratio<T: Copy>(values: &[T], abs: impl Fn(T) -> f64) -> f64 {
    let peak = values.iter().map(|&v| abs(v)).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let edge = abs(values[0]).max(abs(values[values.len() - 1]));
    edge / peak
}

/// Boundary-decay threshold for the "nice function" contract.
pub const NICE_EDGE_RATIO: f64 = 1e-12;
