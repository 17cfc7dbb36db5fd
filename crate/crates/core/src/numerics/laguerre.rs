use crate::prelude::*;

/// Generalized Laguerre polynomial `L^α_n(z)` by the three-term recurrence
/// `(j+1) L_{j+1} = (2j+1+α−z) L_j − (j+α) L_{j−1}`.
pub fn laguerre(n: usize, alpha: f64, z: Complex64) -> Complex64 {
    let mut prev = c(0.0);
    let mut cur = c(1.0);
    for j in 0..n {
        let jf = j as f64;
        let next = (cur * (c(2.0 * jf + 1.0 + alpha) - z) - prev * (jf + alpha)) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// [`laguerre`] extended to negative degree by `L^α_n ≡ 0` for `n < 0`.
pub fn laguerre_signed(n: i64, alpha: f64, z: Complex64) -> Complex64 {
    if n < 0 {
        c(0.0)
    } else {
        laguerre(n as usize, alpha, z)
    }
}

/// Real-argument convenience wrapper.
pub fn laguerre_real(n: usize, alpha: f64, x: f64) -> f64 {
    laguerre(n, alpha, c(x)).re
}

/// Number of zeros of `L^α_n` on the negative real axis.
///
/// There is exactly one such zero when the Pochhammer symbol `(α+1)_n` is
/// negative and none otherwise (so in particular none for `α > −1`).
pub fn negative_axis_zeros(n: usize, alpha: f64) -> usize {
    let mut sign = 1.0;
    for j in 0..n {
        sign *= alpha + 1.0 + j as f64;
    }
    usize::from(sign < 0.0)
}
