#[cfg(not(feature = "std"))]
pub use num_traits::Float;

pub use alloc::vec;
pub use alloc::vec::Vec;
pub use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
