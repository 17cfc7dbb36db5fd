//! Exact solutions, su(1,1) coherent states and Darboux transformations of the
//! time-dependent singular oscillator
//!
//! ```text
//! h0 = -d²/dx² + ω²(t) x² + g x⁻²,   x > 0,   i ∂ψ/∂t = h0 ψ
//! ```
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: log-gamma, modified Bessel functions, generalized Laguerre
//!   polynomials, semi-axis quadrature, radial grids and finite differences.
//! - [`envelope`]: the classical envelope ε(t) with ε̈ + 4ω²ε = 0.
//! - [`states`]: the separated basis ψₙ, Barut-Girardello states ψ_λ and
//!   Perelomov states ψ_z, both as closed forms and as truncated series.
//! - [`algebra`]: the su(1,1) generators on grids and in the holomorphic
//!   (coefficient) representation.
//! - [`darboux`]: the first-order intertwiner L, the partner potential, the
//!   transformed states and the polynomial algebra of the p-operators.
//! - [`measures`]: resolution-of-identity measures, the moment-problem weight
//!   Φ and the reproducing kernel.
//!
//! Everything is `no_std` + `alloc` when the default `std` feature is off.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
pub(crate) mod prelude;

pub mod algebra;
pub mod darboux;
pub mod envelope;
pub mod measures;
pub mod numerics;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
