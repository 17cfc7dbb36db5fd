//! Resolution-of-identity measures, the moment-problem weight Φ and the
//! BG reproducing kernel.
//!
//! All complex-plane integrals are reduced to radial ones: the angular
//! integral of `e^{i(n−n')φ}` kills every off-diagonal matrix element, so only
//! diagonal elements need quadrature. With `x = |λ|²`:
//!
//! - BG: `dμ = (2/π) K_ν(2|λ|) I_ν(2|λ|) d²λ`, `ν = 2k−1`, and
//!   `⟨ψₙ|∫|λ⟩⟨λ|dμ|ψₙ⟩ = aₙ² ∫xⁿ f(x) dx / Γ(2k)` with
//!   `f(x) = 2x^{k−½}K_ν(2√x)`, `∫xⁿf = Γ(n+1)Γ(n+2k)`.
//! - Transformed BG: `dμ₁ = Φ(x) d²λ / (πΓ(2k)|N₀λN₁λ|²)` with
//!   `Φ(x) = x^{m+2k−1} ∫ₓ^∞ y^{−2k−m} f(y) dy` solving
//!   `∫xⁿΦ = Γ(n+1)Γ(n+2k)/(n+2k+m)`.
//! - Perelomov: `dμ = (2k−1)/π (1−|z|²)⁻² d²z` on the unit disc.

use crate::numerics::{
    bessel_i_entire, bessel_i_scaled_real, bessel_k_scaled, gamma_ln, integrate_interval,
    integrate_semiaxis, integrate_tail, Estimate, QuadratureScheme,
};
use crate::prelude::*;
use crate::states::{bg_coefficient, bg_log_norm0, perelomov_coefficient, perelomov_norm0};
use crate::{Error, Result};

fn check_k(k: f64) -> Result<()> {
    if k > 0.5 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "representation label k (need k > 1/2)",
            value: k,
        })
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "radial variable (need x > 0)",
            value: x,
        })
    }
}

/// `f(x) = 2x^{k−½} K_{2k−1}(2√x)`.
pub fn f_weight(x: f64, k: f64) -> Result<f64> {
    check_k(k)?;
    check_x(x)?;
    let s = x.sqrt();
    Ok(2.0 * x.powf(k - 0.5) * bessel_k_scaled(2.0 * k - 1.0, 2.0 * s)? * (-2.0 * s).exp())
}

/// `f(0⁺) = Γ(2k−1)`.
pub fn f_at_zero(k: f64) -> Result<f64> {
    check_k(k)?;
    Ok(gamma_ln(2.0 * k - 1.0)?.exp())
}

/// The integrand of a moment in the variable `s = √x`, which turns the
/// `e^{−2√x}` decay into `e^{−2s}`.
fn moment_in_s<F: Fn(f64) -> Result<f64>>(n: usize, s: f64, w: &F) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    match w(s * s) {
        Ok(v) => 2.0 * s.powi(2 * n as i32 + 1) * v,
        Err(_) => f64::NAN,
    }
}

fn finite(e: Estimate, what: &'static str) -> Result<Estimate> {
    if e.value.re.is_finite() && e.value.im.is_finite() {
        Ok(e)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// `∫₀^∞ xⁿ f(x) dx` by quadrature (exact value `Γ(n+1)Γ(n+2k)`).
pub fn f_moment(n: usize, k: f64, scheme: &QuadratureScheme) -> Result<Estimate> {
    check_k(k)?;
    let sch = scheme.with_scale(n as f64 + 1.0);
    let e = integrate_semiaxis(|s| c(moment_in_s(n, s, &|x| f_weight(x, k))), &sch)?;
    finite(e, "f moment")
}

/// `Φ(x) = x^{m+2k−1} ∫ₓ^∞ y^{−2k−m} f(y) dy` by direct tail quadrature.
/// For repeated evaluation use [`PhiTable`].
pub fn phi_weight(x: f64, k: f64, m: usize, scheme: &QuadratureScheme) -> Result<f64> {
    check_k(k)?;
    check_x(x)?;
    let p = 2.0 * k + m as f64;
    let s0 = x.sqrt();
    // in s = √y: ∫ 2s·s^{−2p} f(s²) ds, taken relative to s0 to avoid overflow
    let g = |s: f64| c(2.0 * (s / s0).powf(1.0 - 2.0 * p) * f_weight(s * s, k).unwrap_or(f64::NAN));
    let t = finite(
        integrate_tail(g, s0, &scheme.with_scale(0.5 + s0 * 0.1))?,
        "phi tail",
    )?;
    // x^{p−1} · s0^{1−2p} · ∫… = s0^{−1}·∫…
    Ok(t.value.re / s0)
}

/// Φ tabulated on uniform nodes in `s = √x`, with exact slopes
/// `dΦ/ds = 2((m+2k−1)Φ − f)/s` and monotone (Fritsch–Carlson limited)
/// cubic Hermite interpolation between nodes.
///
/// Immutable once built, so it can be shared freely between threads.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiTable {
    pub k: f64,
    pub m: usize,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

/// Default node spacing in `s` and table end.
pub const PHI_TABLE_STEP: f64 = 0.02;
pub const PHI_TABLE_END: f64 = 60.0;

impl PhiTable {
    pub fn new(k: f64, m: usize, scheme: &QuadratureScheme) -> Result<Self> {
        Self::with_nodes(k, m, PHI_TABLE_STEP, PHI_TABLE_END, scheme)
    }

    pub fn with_nodes(
        k: f64,
        m: usize,
        step: f64,
        end: f64,
        scheme: &QuadratureScheme,
    ) -> Result<Self> {
        check_k(k)?;
        if !(step > 0.0 && end > step) {
            return Err(Error::Domain {
                what: "Φ table node spacing",
                value: step,
            });
        }
        let n = (end / step).ceil() as usize + 1;
        let p = 2.0 * k + m as f64;
        let q = p - 1.0;
        // Integrand in s of the tail, scaled by s_j^{2p−1} on the panel
        // [s_j, s_{j+1}] so that values stay O(f).
        let mut values = vec![0.0; n];
        let mut slopes = vec![0.0; n];
        let last = (n - 1) as f64 * step;
        values[n - 1] = phi_weight(last * last, k, m, scheme)?;
        for j in (1..n - 1).rev() {
            let a = j as f64 * step;
            let b = a + step;
            let g = |s: f64| {
                c(2.0 * (s / a).powf(1.0 - 2.0 * p) * f_weight(s * s, k).unwrap_or(f64::NAN))
            };
            let panel = finite(integrate_interval(g, a, b, scheme)?, "phi panel")?
                .value
                .re
                / a;
            // Φ(a) = a^{2q}·T(a) with T(a) = ∫_a^b + T(b) and T(b) = Φ(b)/b^{2q}
            values[j] = panel + values[j + 1] * (a / b).powf(2.0 * q);
        }
        values[0] = f_at_zero(k)? / q;
        for j in 1..n {
            let s = j as f64 * step;
            slopes[j] = 2.0 * (q * values[j] - f_weight(s * s, k)?) / s;
        }
        // the s → 0 limit of the slope vanishes for k > 3/4 and is unbounded
        // below; a one-sided secant keeps the first panel monotone either way
        slopes[0] = if k > 0.75 {
            0.0
        } else {
            (values[1] - values[0]) / step
        };
        limit_slopes(&values, &mut slopes, step);
        Ok(PhiTable {
            k,
            m,
            step,
            values,
            slopes,
        })
    }

    /// Largest tabulated `s`; Φ is taken as zero beyond `x = end²`.
    pub fn end(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    /// Interpolated `Φ(x)` for `x ≥ 0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::Domain {
                what: "Φ argument",
                value: x,
            });
        }
        let s = x.sqrt();
        if s >= self.end() {
            return Ok(0.0);
        }
        let j = ((s / self.step) as usize).min(self.values.len() - 2);
        let h = self.step;
        let t = (s - j as f64 * h) / h;
        let (y0, y1) = (self.values[j], self.values[j + 1]);
        let (d0, d1) = (self.slopes[j] * h, self.slopes[j + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        Ok((2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1)
    }

    /// `∫₀^∞ xⁿ Φ(x) dx` over the interpolant (exact value
    /// `Γ(n+1)Γ(n+2k)/(n+2k+m)`).
    pub fn moment(&self, n: usize, scheme: &QuadratureScheme) -> Result<Estimate> {
        let mut total = Estimate {
            value: c(0.0),
            error: 0.0,
            evals: 0,
        };
        for j in 0..self.values.len() - 1 {
            let a = j as f64 * self.step;
            let e = integrate_interval(
                |s| c(moment_in_s(n, s, &|x| self.eval(x))),
                a,
                a + self.step,
                scheme,
            )?;
            total.value += e.value;
            total.error += e.error;
            total.evals += e.evals;
        }
        finite(total, "phi moment")
    }
}

/// Fritsch–Carlson: on monotone intervals keep `(α, β)` inside the circle of
/// radius 3 and zero slopes of the wrong sign.
fn limit_slopes(y: &[f64], d: &mut [f64], h: f64) {
    for j in 0..y.len() - 1 {
        let delta = (y[j + 1] - y[j]) / h;
        if delta == 0.0 {
            d[j] = 0.0;
            d[j + 1] = 0.0;
            continue;
        }
        if d[j] * delta < 0.0 {
            d[j] = 0.0;
        }
        if d[j + 1] * delta < 0.0 {
            d[j + 1] = 0.0;
        }
        let a = d[j] / delta;
        let b = d[j + 1] / delta;
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            d[j] = tau * a * delta;
            d[j + 1] = tau * b * delta;
        }
    }
}

/// Which resolution of the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureFamily {
    OriginalBg,
    TransformedBg,
    Perelomov,
}

/// A radial measure density. For the BG families the variable is
/// `x = |λ|²` and the density is per `d²λ`; for Perelomov it is `r = |z|`
/// and per `d²z`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMeasure {
    pub family: MeasureFamily,
    pub k: f64,
    pub m: usize,
    phi: Option<PhiTable>,
}

impl RadialMeasure {
    pub fn original_bg(k: f64) -> Result<Self> {
        check_k(k)?;
        Ok(RadialMeasure {
            family: MeasureFamily::OriginalBg,
            k,
            m: 0,
            phi: None,
        })
    }

    pub fn transformed_bg(table: PhiTable) -> Self {
        RadialMeasure {
            family: MeasureFamily::TransformedBg,
            k: table.k,
            m: table.m,
            phi: Some(table),
        }
    }

    pub fn perelomov(k: f64) -> Result<Self> {
        check_k(k)?;
        Ok(RadialMeasure {
            family: MeasureFamily::Perelomov,
            k,
            m: 0,
            phi: None,
        })
    }

    pub fn phi_table(&self) -> Option<&PhiTable> {
        self.phi.as_ref()
    }

    /// Density at radial variable `v` (`x = |λ|²` or `r = |z|`).
    pub fn density(&self, v: f64) -> Result<f64> {
        match self.family {
            MeasureFamily::OriginalBg => bg_measure_density(v, self.k),
            MeasureFamily::TransformedBg => {
                let table = self
                    .phi
                    .as_ref()
                    .ok_or(Error::NonFinite("missing Φ table"))?;
                transformed_bg_measure_density(v, table)
            }
            MeasureFamily::Perelomov => perelomov_measure_density(v, self.k),
        }
    }
}

/// `(2/π) K_ν(2√x) I_ν(2√x)`, `ν = 2k−1`.
pub fn bg_measure_density(x: f64, k: f64) -> Result<f64> {
    check_k(k)?;
    check_x(x)?;
    let r = x.sqrt();
    let nu = 2.0 * k - 1.0;
    Ok(2.0 / core::f64::consts::PI
        * bessel_k_scaled(nu, 2.0 * r)?
        * bessel_i_scaled_real(nu, 2.0 * r)?)
}

/// `N₁λ` as a function of `x = |λ|²`.
fn n1_lambda_sq(x: f64, k: f64, m: usize) -> Result<f64> {
    let mean = crate::algebra::mean_k0(c(x.sqrt()), k)?;
    Ok(1.0 / (mean + k + m as f64))
}

/// `Φ(x) / (π Γ(2k) |N₀λ N₁λ|²)`.
pub fn transformed_bg_measure_density(x: f64, table: &PhiTable) -> Result<f64> {
    check_x(x)?;
    let k = table.k;
    let n0sq = (2.0 * bg_log_norm0(c(x.sqrt()), k)?).exp();
    let n1sq = n1_lambda_sq(x, k, table.m)?;
    Ok(table.eval(x)? / (core::f64::consts::PI * gamma_ln(2.0 * k)?.exp() * n0sq * n1sq))
}

/// `(2k−1)/π · (1−r²)⁻²` for `0 ≤ r < 1`.
pub fn perelomov_measure_density(r: f64, k: f64) -> Result<f64> {
    check_k(k)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain {
            what: "Perelomov radius (need 0 ≤ r < 1)",
            value: r,
        });
    }
    Ok((2.0 * k - 1.0) / core::f64::consts::PI / (1.0 - r * r).powi(2))
}

/// `⟨ψₙ|∫|CS⟩⟨CS|dμ|ψₙ'⟩` (φₙ for the transformed family).
///
/// Off-diagonal elements are zero by the angular integral and are returned
/// without quadrature; diagonal ones reduce to one radial integral.
pub fn identity_resolution_check(
    measure: &RadialMeasure,
    n: usize,
    n_prime: usize,
    scheme: &QuadratureScheme,
) -> Result<Complex64> {
    if n != n_prime {
        return Ok(c(0.0));
    }
    let k = measure.k;
    let pi = core::f64::consts::PI;
    match measure.family {
        MeasureFamily::OriginalBg => {
            // π ∫ |N₀|² aₙ² xⁿ ρ(x) dx, with d²λ = ½ dx dφ
            let a2 = bg_coefficient(n, k)?.powi(2);
            let w = |x: f64| -> Result<f64> {
                let n0sq = (2.0 * bg_log_norm0(c(x.sqrt()), k)?).exp();
                Ok(pi * n0sq * a2 * bg_measure_density(x, k)?)
            };
            let sch = scheme.with_scale(n as f64 + 1.0);
            let e = integrate_semiaxis(|s| c(moment_in_s(n, s, &w)), &sch)?;
            Ok(finite(e, "BG resolution")?.value)
        }
        MeasureFamily::TransformedBg => {
            // |⟨φₙ|φ_λ⟩|² = |N₀N₁|² aₙ² (n+2k+m) xⁿ
            let table = measure
                .phi
                .as_ref()
                .ok_or(Error::NonFinite("missing Φ table"))?;
            let a2 = bg_coefficient(n, k)?.powi(2);
            let m = table.m as f64;
            let w = |x: f64| -> Result<f64> {
                let n0sq = (2.0 * bg_log_norm0(c(x.sqrt()), k)?).exp();
                let n1sq = n1_lambda_sq(x, k, table.m)?;
                Ok(pi
                    * n0sq
                    * n1sq
                    * a2
                    * (n as f64 + 2.0 * k + m)
                    * transformed_bg_measure_density(x, table)?)
            };
            let mut total = c(0.0);
            let steps = (table.end() / table.step).round() as usize;
            for j in 0..steps {
                let a = j as f64 * table.step;
                total +=
                    integrate_interval(|s| c(moment_in_s(n, s, &w)), a, a + table.step, scheme)?
                        .value;
            }
            if total.re.is_finite() {
                Ok(total)
            } else {
                Err(Error::NonFinite("transformed BG resolution"))
            }
        }
        MeasureFamily::Perelomov => {
            // 2π ∫₀¹ |N₀z|² pₙ² r^{2n} w(r) r dr
            let p2 = perelomov_coefficient(n, k)?.powi(2);
            let f = |r: f64| {
                let n0sq = perelomov_norm0(c(r), k).map(|v| v * v).unwrap_or(f64::NAN);
                let w = perelomov_measure_density(r, k).unwrap_or(f64::NAN);
                c(2.0 * pi * n0sq * p2 * r.powi(2 * n as i32 + 1) * w)
            };
            let e = integrate_interval(f, 0.0, 1.0, scheme)?;
            Ok(finite(e, "Perelomov resolution")?.value)
        }
    }
}

/// `δ(λ, λ') = Σ aₙ² (λλ̄')ⁿ = Γ(2k) Ĩ_{2k−1}(4λλ̄')`, an entire function of
/// `λλ̄'` (no branch to track).
pub fn reproducing_kernel(lambda: Complex64, lambda_prime: Complex64, k: f64) -> Result<Complex64> {
    check_k(k)?;
    Ok(
        bessel_i_entire(2.0 * k - 1.0, lambda * lambda_prime.conj() * 4.0)?
            * gamma_ln(2.0 * k)?.exp(),
    )
}

/// Number of angular nodes in [`kernel_point_evaluation`].
pub const ANGULAR_NODES: usize = 64;

/// `∫ δ(λ, λ') λ'^p |N₀λ'|² dμ(λ')`, which reproduces `λ^p`.
///
/// Radial adaptive quadrature in `r = |λ'|` with an [`ANGULAR_NODES`]-point
/// trapezoid in the angle (exact for the trigonometric polynomials involved up
/// to aliasing of terms of order ≥ 64 − p, which are negligible).
pub fn kernel_point_evaluation(
    lambda: Complex64,
    p: u32,
    k: f64,
    scheme: &QuadratureScheme,
) -> Result<Complex64> {
    check_k(k)?;
    let nu = 2.0 * k - 1.0;
    let g2k = gamma_ln(2.0 * k)?;
    let big_r = 40.0 + 4.0 * lambda.norm() + 2.0 * p as f64;
    let two_pi = 2.0 * core::f64::consts::PI;
    let f = |r: f64| -> Complex64 {
        if r <= 0.0 {
            return c(0.0);
        }
        // |N₀|²·(2/π)K_ν(2r)I_ν(2r) = (2/π) K_ν(2r) r^ν / Γ(2k)
        let radial = match bessel_k_scaled(nu, 2.0 * r) {
            Ok(kv) => 2.0 / core::f64::consts::PI * kv * (-2.0 * r + nu * r.ln() - g2k).exp(),
            Err(_) => return c(f64::NAN),
        };
        let mut ang = c(0.0);
        for j in 0..ANGULAR_NODES {
            let phi = two_pi * j as f64 / ANGULAR_NODES as f64;
            let lp = Complex64::from_polar(r, phi);
            match reproducing_kernel(lambda, lp, k) {
                Ok(kv) => ang += kv * lp.powu(p),
                Err(_) => return c(f64::NAN),
            }
        }
        ang * (two_pi / ANGULAR_NODES as f64) * radial * r
    };
    let e = integrate_interval(f, 0.0, big_r, scheme)?;
    Ok(finite(e, "kernel point evaluation")?.value)
}

/// Largest relative deviation of `d/dx[x^{1−m−2k}Φ(x)]` (central
/// differences of the interpolant) from `−x^{−2k−m}f(x)` at the given points.
pub fn phi_recovery_check(table: &PhiTable, xs: &[f64]) -> Result<f64> {
    let k = table.k;
    let p = 2.0 * k + table.m as f64;
    let t = |x: f64| -> Result<f64> { Ok(x.powf(1.0 - p) * table.eval(x)?) };
    let mut worst: f64 = 0.0;
    for &x in xs {
        check_x(x)?;
        let h = 1e-4 * x;
        let d = (t(x + h)? - t(x - h)?) / (2.0 * h);
        let want = -x.powf(-p) * f_weight(x, k)?;
        worst = worst.max((d - want).abs() / want.abs());
    }
    Ok(worst)
}
