//! Special functions, quadrature and radial-grid calculus.

mod bessel;
mod gamma;
mod grid;
mod laguerre;
mod quadrature;

pub use bessel::{
    bessel_i, bessel_i_entire, bessel_i_entire_scaled, bessel_i_scaled, bessel_i_scaled_real,
    bessel_k, bessel_k_scaled, bessel_k_scaled_pair, EXP_CAP,
};
pub use gamma::gamma_ln;
pub use grid::{grid_derivative, GridWave, RadialGrid, Spacing, DEFAULT_STENCIL};
pub use laguerre::{laguerre, laguerre_real, laguerre_signed, negative_axis_zeros};
pub use quadrature::{
    gauss_laguerre_rule, integrate_interval, integrate_semiaxis, integrate_semiaxis_real,
    integrate_tail, Estimate, QuadratureKind, QuadratureScheme,
};
