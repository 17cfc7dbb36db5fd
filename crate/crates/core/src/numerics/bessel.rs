//! Modified Bessel functions of real order.
//!
//! `I_ν(z)` is evaluated for complex `z` on the principal branch. Inside the
//! series region the ascending power series is summed directly; outside it the
//! Hankel expansion is used, including the exponentially small second
//! exponential so that the result stays accurate near the imaginary axis.
//!
//! The series region is `|z| < 16`, extended to `|z| < 30` whenever
//! `|z| − |Re z| ≤ 13`. The second condition bounds the cancellation of the
//! alternating series (for imaginary `z` the terms grow like `e^{|z|}` while the
//! sum stays O(1)), so that at most ~6 digits are lost.
//!
//! The unscaled `I_ν` refuses arguments with `|Re z| > 700` and reports
//! [`Error::Overflow`]; the exponentially scaled variants have no cap.

use crate::prelude::*;
use crate::{Error, Result};

use super::gamma::{gamma_ln, rgamma1p, temme_gammas};
use core::f64::consts::PI;

/// Largest `|Re z|` accepted by the unscaled functions.
pub const EXP_CAP: f64 = 700.0;

const EPS: f64 = 1e-17;

fn use_series(z: Complex64) -> bool {
    let r = z.norm();
    r < 16.0 || (r < 30.0 && r - z.re.abs() <= 13.0)
}

fn check_order(nu: f64) -> Result<()> {
    if nu >= 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "bessel order",
            value: nu,
        })
    }
}

fn check_arg(z: Complex64, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Σ_m q^m / (m! Γ(m+ν+1)), the entire function Ĩ_ν evaluated at 4q.
fn reduced_series(nu: f64, q: Complex64) -> Result<Complex64> {
    let mut term = c((-gamma_ln(nu + 1.0)?).exp());
    let mut sum = term;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= q / (m * (m + nu));
        sum += term;
        if term.norm() <= EPS * sum.norm() && m > q.norm().sqrt() {
            return Ok(sum);
        }
        if m > 500.0 {
            return Err(Error::Truncation {
                terms: 500,
                tail: term.norm(),
            });
        }
    }
}

/// Hankel sums A = Σ(−1)^k a_k(ν)/z^k and B = Σ a_k(ν)/z^k, each truncated at
/// its smallest term.
fn hankel_sums(nu: f64, z: Complex64) -> (Complex64, Complex64) {
    let mu = 4.0 * nu * nu;
    let zi = z.inv();
    let mut term = c(1.0);
    let mut a = c(1.0);
    let mut b = c(1.0);
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= zi * ((mu - odd * odd) / (8.0 * kf));
        let size = term.norm();
        if size > last || size == 0.0 {
            break;
        }
        last = size;
        if k % 2 == 1 {
            a -= term;
        } else {
            a += term;
        }
        b += term;
        if size < EPS {
            break;
        }
    }
    (a, b)
}

/// `I_ν(z)·e^{−|Re z|}` outside the series region.
fn asymptotic_scaled(nu: f64, z: Complex64) -> Complex64 {
    let (a, b) = hankel_sums(nu, z);
    let s = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let ar = z.re.abs();
    let dominant = (z - ar).exp() * a;
    let phase = Complex64::from_polar(1.0, s * PI * nu);
    let recessive = I * s * phase * (-z - ar).exp() * b;
    (dominant + recessive) / (z * (2.0 * PI)).sqrt()
}

/// `I_ν(z)·e^{−|Re z|}` on the principal branch.
pub fn bessel_i_scaled(nu: f64, z: Complex64) -> Result<Complex64> {
    check_order(nu)?;
    check_arg(z, "bessel_i")?;
    if z.norm() == 0.0 {
        return Ok(if nu == 0.0 { c(1.0) } else { c(0.0) });
    }
    if use_series(z) {
        let half = z * 0.5;
        let pre = (half.ln() * nu).exp();
        let sum = reduced_series(nu, half * half)?;
        Ok(pre * sum * (-z.re.abs()).exp())
    } else {
        Ok(asymptotic_scaled(nu, z))
    }
}

/// Modified Bessel function of the first kind `I_ν(z)` for real `ν ≥ 0` and
/// complex `z` (principal branch).
pub fn bessel_i(nu: f64, z: Complex64) -> Result<Complex64> {
    if z.re.abs() > EXP_CAP {
        return Err(Error::Overflow {
            what: "bessel_i",
            argument: z.norm(),
        });
    }
    Ok(bessel_i_scaled(nu, z)? * z.re.abs().exp())
}

/// Real `I_ν(x)·e^{−x}` for `x ≥ 0`.
pub fn bessel_i_scaled_real(nu: f64, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain {
            what: "bessel_i_scaled_real",
            value: x,
        });
    }
    Ok(bessel_i_scaled(nu, c(x))?.re)
}

/// The entire function `Ĩ_ν(w) = Σ (w/4)^m / (m! Γ(m+ν+1))`, so that
/// `I_ν(z) = (z/2)^ν Ĩ_ν(z²)` on every branch, scaled by `e^{−|Re √w|}`.
pub fn bessel_i_entire_scaled(nu: f64, w: Complex64) -> Result<Complex64> {
    check_order(nu)?;
    check_arg(w, "bessel_i_entire")?;
    let z = w.sqrt();
    if use_series(z) {
        Ok(reduced_series(nu, w * 0.25)? * (-z.re.abs()).exp())
    } else {
        let pre = ((z * 0.5).ln() * nu).exp();
        Ok(asymptotic_scaled(nu, z) / pre)
    }
}

/// The entire function `Ĩ_ν(w)`; see [`bessel_i_entire_scaled`].
pub fn bessel_i_entire(nu: f64, w: Complex64) -> Result<Complex64> {
    let re = w.sqrt().re.abs();
    if re > EXP_CAP {
        return Err(Error::Overflow {
            what: "bessel_i_entire",
            argument: w.norm(),
        });
    }
    Ok(bessel_i_entire_scaled(nu, w)? * re.exp())
}

/// `(K_ν(x), K_{ν+1}(x))·e^{x}` for real `ν ≥ 0`, `x > 0`.
///
/// Temme's series for `x < 2`, Steed's continued fraction otherwise, both for
/// the reduced order `|μ| ≤ ½`, followed by upward recurrence in the order.
pub fn bessel_k_scaled_pair(nu: f64, x: f64) -> Result<(f64, f64)> {
    check_order(nu)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "bessel_k",
            value: x,
        });
    }
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let (mut kmu, mut k1) = if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < 1e-16 {
            1.0
        } else {
            pimu / pimu.sin()
        };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < 1e-16 { 1.0 } else { e.sinh() / e };
        let (gam1, gam2) = temme_gammas(mu);
        let gampl = rgamma1p(mu);
        let gammi = rgamma1p(-mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut cc = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut i = 1.0;
        loop {
            ff = (i * ff + p + q) / (i * i - mu2);
            cc *= dd / i;
            p /= i - mu;
            q /= i + mu;
            let del = cc * ff;
            sum += del;
            sum1 += cc * (p - i * ff);
            if del.abs() < sum.abs() * 1e-16 {
                break;
            }
            i += 1.0;
            if i > 500.0 {
                return Err(Error::Truncation {
                    terms: 500,
                    tail: del.abs(),
                });
            }
        }
        let scale = x.exp();
        (sum * scale, sum1 * xi2 * scale)
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut cc = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut i = 1.0;
        loop {
            a -= 2.0 * i;
            cc = -a * cc / (i + 1.0);
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += cc * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < 1e-16 {
                break;
            }
            i += 1.0;
            if i > 10_000.0 {
                return Err(Error::Truncation {
                    terms: 10_000,
                    tail: dels.abs(),
                });
            }
        }
        h *= a1;
        let kmu = (PI / (2.0 * x)).sqrt() / s;
        (kmu, kmu * (mu + x + 0.5 - h) * xi)
    };
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    if !kmu.is_finite() || !k1.is_finite() {
        return Err(Error::Overflow {
            what: "bessel_k",
            argument: x,
        });
    }
    Ok((kmu, k1))
}

/// `K_ν(x)·e^{x}`.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled_pair(nu, x)?.0)
}

/// Modified Bessel function of the second kind `K_ν(x)` for real `ν ≥ 0`,
/// `x > 0`. Underflows gracefully to zero for large `x`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let scaled = bessel_k_scaled(nu, x)?;
    Ok(scaled * (-x).exp())
}
