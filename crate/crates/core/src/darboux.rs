//! First-order Darboux transformation of the time-dependent equation.
//!
//! The transformation function is the virtual solution
//! `u = ψ_m` (upper sign, α = 2k−1 > 0), which is nodeless on `(0, ∞)`. With
//! `z = −x²/(8γ)` its logarithmic derivative is
//!
//! ```text
//! w = uₓ/u = (4k−1)/(2x) + x/(8γ) + iγ̇x/(4γ) + x L^{2k}_{m−1}(z) / (4γ L^{2k−1}_m(z))
//! ```
//!
//! and the intertwiner and its formal adjoint are `L = √(2γ)(∂ₓ − w)`,
//! `L⁺ = √(2γ)(−∂ₓ − w̄)`. `L` maps solutions of `i∂ₜψ = h₀ψ` to solutions of
//! `i∂ₜφ = (h₀ + A_m)φ` with `A_m = −(ln|u|²)ₓₓ`, and `L⁺L = k₀ + k + m` on the
//! bound basis. The transformed ladder operators `p₀ = LL⁺ − k − m`,
//! `p± = L k± L⁺` close the polynomial algebra
//!
//! ```text
//! [p₀, p±] = ±p±,   [p₋, p₊] = 2[k(1−k) + (k+m)p₀ + 2p₀²](p₀ + k + m).
//! ```

use alloc::sync::Arc;

use crate::algebra::{k_minus, k_plus, mean_k0, CoeffVector};
use crate::envelope::Envelope;
use crate::numerics::{laguerre, laguerre_signed, negative_axis_zeros, GridWave, RadialGrid};
use crate::prelude::*;
use crate::states::{
    basis_state, bg_log_norm0, bg_state_closed, bg_state_series, perelomov_norm0, perelomov_state,
    perelomov_state_series, BasisIndex, PhysParams,
};
use crate::{Error, Result};

/// Index of the transformation function `u = ψ_m` (virtual branch, α = 2k−1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DarbouxConfig {
    pub m: usize,
}

impl DarbouxConfig {
    pub fn new(m: usize) -> Self {
        DarbouxConfig { m }
    }

    /// Checks that `α = 2k−1 > 0` and that `L^α_m` has no zero on the
    /// negative axis, i.e. that `u` is nodeless.
    pub fn validate(&self, params: &PhysParams) -> Result<()> {
        let alpha = params.alpha();
        if !(alpha > 0.0) {
            return Err(Error::Domain {
                what: "Darboux transformation needs 2k − 1 > 0",
                value: alpha,
            });
        }
        if negative_axis_zeros(self.m, alpha) != 0 {
            return Err(Error::Node { x: f64::NAN });
        }
        Ok(())
    }

    /// `u = ψ_m` on a grid. It grows like `e^{x²/(16γ)}`, so keep the grid
    /// short enough to avoid overflow.
    pub fn transformation_function(
        &self,
        params: &PhysParams,
        env: &Envelope,
        grid: &Arc<RadialGrid>,
    ) -> Result<GridWave> {
        self.validate(params)?;
        basis_state(
            &BasisIndex::virtual_upper(self.m, params, true),
            params,
            env,
            grid,
        )
    }
}

/// `uₓ/u` of the transformation function at `x`.
pub fn log_derivative(
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
    x: f64,
) -> Complex64 {
    let k = params.k;
    let g = env.gamma;
    let z = c(-x * x / (8.0 * g));
    let m = cfg.m as i64;
    let ratio = laguerre_signed(m - 1, 2.0 * k, z) / laguerre(cfg.m, 2.0 * k - 1.0, z);
    Complex64::new(
        (4.0 * k - 1.0) / (2.0 * x) + x / (8.0 * g),
        env.gamma_dot * x / (4.0 * g),
    ) + ratio * (x / (4.0 * g))
}

/// `ln|u|²` of the transformation function, evaluated without overflow.
pub fn log_modulus_sq(cfg: &DarbouxConfig, params: &PhysParams, env: &Envelope, x: f64) -> f64 {
    let alpha = params.alpha();
    let y = x / (2.0 * env.gamma.sqrt());
    let lag = laguerre(cfg.m, alpha, c(-0.5 * y * y)).re;
    -0.5 * env.gamma.ln() + (2.0 * alpha + 1.0) * y.ln() + 0.5 * y * y + 2.0 * lag.abs().ln()
}

fn log_derivatives(
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
    grid: &RadialGrid,
) -> Result<Vec<Complex64>> {
    cfg.validate(params)?;
    let out: Vec<Complex64> = grid
        .points()
        .iter()
        .map(|&x| log_derivative(cfg, params, env, x))
        .collect();
    if let Some(j) = out
        .iter()
        .position(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::Node {
            x: grid.points()[j],
        });
    }
    Ok(out)
}

/// `Lψ = √(2γ)(ψₓ − wψ)`.
///
/// The `a/x` part of `w` (with `a = 2k − ½`) is taken together with the
/// derivative as `x^a ∂ₓ x^{−a}`, which avoids cancellation near the origin.
pub fn apply_l(
    w: &GridWave,
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
) -> Result<GridWave> {
    let wd = log_derivatives(cfg, params, env, &w.grid)?;
    let a = params.singular_exponent();
    let d = w.grid.twisted_derivative(&w.values, a)?;
    let x = w.grid.points();
    let s = (2.0 * env.gamma).sqrt();
    let values = (0..d.len())
        .map(|j| (d[j] - (wd[j] - a / x[j]) * w.values[j]) * s)
        .collect();
    Ok(GridWave {
        untrusted: w.untrusted + w.grid.edge_width(),
        ..w.with_values(values)
    })
}

/// `L⁺ψ = √(2γ)(−ψₓ − w̄ψ)`, the formal adjoint of [`apply_l`], with the
/// `a/x` part applied as `x^{−a} ∂ₓ x^a`.
pub fn apply_l_dagger(
    w: &GridWave,
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
) -> Result<GridWave> {
    let wd = log_derivatives(cfg, params, env, &w.grid)?;
    let a = params.singular_exponent();
    let d = w.grid.twisted_derivative(&w.values, -a)?;
    let x = w.grid.points();
    let s = (2.0 * env.gamma).sqrt();
    let values = (0..d.len())
        .map(|j| -(d[j] + (wd[j].conj() - a / x[j]) * w.values[j]) * s)
        .collect();
    Ok(GridWave {
        untrusted: w.untrusted + w.grid.edge_width(),
        ..w.with_values(values)
    })
}

/// `L₁[∂ₓ − uₓ/u]ψ` for an arbitrary nodeless `u` sampled on the same grid,
/// with `uₓ` taken by finite differences.
pub fn apply_l_generic(w: &GridWave, u: &GridWave, l1: f64) -> Result<GridWave> {
    check_nodes(u)?;
    let du = u.grid.differentiate(&u.values, 1)?;
    let d = w.grid.differentiate(&w.values, 1)?;
    let values = (0..d.len())
        .map(|j| (d[j] - du[j] / u.values[j] * w.values[j]) * l1)
        .collect();
    Ok(GridWave {
        untrusted: w.untrusted.max(u.untrusted) + w.grid.edge_width(),
        ..w.with_values(values)
    })
}

fn check_nodes(u: &GridWave) -> Result<()> {
    let x = u.grid.points();
    let a: Vec<f64> = u.values.iter().map(|v| v.norm()).collect();
    for j in 0..a.len() {
        let lo = if j > 0 { a[j - 1] } else { a[j] };
        let hi = if j + 1 < a.len() { a[j + 1] } else { a[j] };
        if a[j] == 0.0 || (j > 0 && j + 1 < a.len() && a[j] < 1e-8 * lo.min(hi)) {
            return Err(Error::Node { x: x[j] });
        }
    }
    Ok(())
}

/// Largest interior `|(ln(u/ū))ₓₓₓ|`. `ln(u/ū) = 2i arg u` is evaluated with
/// the phase unwrapped along the grid. Admissible transformation functions
/// give (numerically) zero.
pub fn reality_condition_check(u: &GridWave) -> Result<f64> {
    check_nodes(u)?;
    let mut phase = Vec::with_capacity(u.values.len());
    let mut last = 0.0;
    let mut offset = 0.0;
    for (j, v) in u.values.iter().enumerate() {
        let a = v.arg();
        if j > 0 {
            let d = a - last;
            if d > core::f64::consts::PI {
                offset -= 2.0 * core::f64::consts::PI;
            } else if d < -core::f64::consts::PI {
                offset += 2.0 * core::f64::consts::PI;
            }
        }
        last = a;
        phase.push(2.0 * (a + offset));
    }
    let d3 = u.grid.differentiate_real(&phase, 3)?;
    let e = u.untrusted + u.grid.edge_width();
    Ok(d3[e..d3.len() - e].iter().fold(0.0, |m, v| m.max(v.abs())))
}

/// Closed form of `A_m(x)` with `z = −x²/(8γ)` and `L_{−1} = L_{−2} = 0`:
///
/// ```text
/// A_m = (4k−1)/x² + ⅛ (x L^{2k}_{m−1} / (γ L^{2k−1}_m))²
///       − (x² L^{2k+1}_{m−2} + 4γ L^{2k}_{m−1}) / (8γ² L^{2k−1}_m) − 1/(4γ)
/// ```
pub fn potential_difference(
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
    grid: &RadialGrid,
) -> Result<Vec<f64>> {
    cfg.validate(params)?;
    let k = params.k;
    let g = env.gamma;
    let m = cfg.m as i64;
    let out: Vec<f64> = grid
        .points()
        .iter()
        .map(|&x| {
            let z = c(-x * x / (8.0 * g));
            let lm = laguerre(cfg.m, 2.0 * k - 1.0, z).re;
            let l1 = laguerre_signed(m - 1, 2.0 * k, z).re;
            let l2 = laguerre_signed(m - 2, 2.0 * k + 1.0, z).re;
            let r = x * l1 / (g * lm);
            (4.0 * k - 1.0) / (x * x) + r * r / 8.0
                - (x * x * l2 + 4.0 * g * l1) / (8.0 * g * g * lm)
                - 1.0 / (4.0 * g)
        })
        .collect();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("potential difference"));
    }
    Ok(out)
}

/// `−(ln|u|²)ₓₓ` by finite differences of the analytic `ln|u|²`.
pub fn potential_difference_numeric(
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
    grid: &RadialGrid,
) -> Result<Vec<f64>> {
    cfg.validate(params)?;
    let lm: Vec<f64> = grid
        .points()
        .iter()
        .map(|&x| log_modulus_sq(cfg, params, env, x))
        .collect();
    Ok(grid
        .differentiate_real(&lm, 2)?
        .into_iter()
        .map(|v| -v)
        .collect())
}

/// `−(ln|u|²)ₓₓ` for an arbitrary nodeless wave.
pub fn minus_log_modulus_sq_xx(u: &GridWave) -> Result<Vec<f64>> {
    check_nodes(u)?;
    let lm: Vec<f64> = u.values.iter().map(|v| v.norm_sqr().ln()).collect();
    Ok(u.grid
        .differentiate_real(&lm, 2)?
        .into_iter()
        .map(|v| -v)
        .collect())
}

/// Which transformed state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformedKind {
    PhiN(usize),
    PhiLambda(Complex64),
    PhiZ(Complex64),
}

/// `N·Lψ` with its normalization constant.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedState {
    pub wave: GridWave,
    pub kind: TransformedKind,
    pub normalization: f64,
}

/// `N₁ₙ = (n+2k+m)^{−1/2}`.
pub fn n1_basis(n: usize, k: f64, m: usize) -> f64 {
    (n as f64 + 2.0 * k + m as f64).powf(-0.5)
}

/// `N₁λ = ⟨ψ_λ|k₀+k+m|ψ_λ⟩^{−1/2}`.
pub fn n1_lambda(lambda: Complex64, k: f64, m: usize) -> Result<f64> {
    Ok((mean_k0(lambda, k)? + k + m as f64).powf(-0.5))
}

/// `N₁z = (m + 2k/(1−|z|²))^{−1/2}`.
pub fn n1_z(z: Complex64, k: f64, m: usize) -> Result<f64> {
    perelomov_norm0(z, k)?;
    Ok((m as f64 + 2.0 * k / (1.0 - z.norm_sqr())).powf(-0.5))
}

/// Transformed state by the closed-form route: `L` applied to the closed-form
/// original state, times the normalization constant.
pub fn transformed_state(
    kind: TransformedKind,
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
    grid: &Arc<RadialGrid>,
) -> Result<TransformedState> {
    let (psi, normalization) = match kind {
        TransformedKind::PhiN(n) => (
            basis_state(&BasisIndex::bound(n, params), params, env, grid)?,
            n1_basis(n, params.k, cfg.m),
        ),
        TransformedKind::PhiLambda(l) => (
            bg_state_closed(l, params, env, grid)?,
            n1_lambda(l, params.k, cfg.m)?,
        ),
        TransformedKind::PhiZ(z) => (
            perelomov_state(z, params, env, grid)?,
            n1_z(z, params.k, cfg.m)?,
        ),
    };
    let wave = apply_l(&psi, cfg, params, env)?.scale(c(normalization));
    Ok(TransformedState {
        wave,
        kind,
        normalization,
    })
}

/// Series coefficient `bₙ = aₙ √((n+2k+m)/(2k+m))` of the transformed states
/// over `φₙ`, given the original coefficient `aₙ`.
pub fn transformed_coefficient(a_n: f64, n: usize, k: f64, m: usize) -> f64 {
    a_n * ((n as f64 + 2.0 * k + m as f64) / (2.0 * k + m as f64)).sqrt()
}

/// Transformed coherent state by the series route
/// `N Σ bₙ ℓⁿ φₙ` with `N = N₀ N₁ √(2k+m)`, built from the series form of the
/// original state (so the result carries no closed-form phase convention).
pub fn transformed_state_series(
    kind: TransformedKind,
    max_terms: usize,
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
    grid: &Arc<RadialGrid>,
) -> Result<TransformedState> {
    let k = params.k;
    let m = cfg.m;
    // Σ bₙ ℓⁿ φₙ = N₁⁻¹... : φₙ = N₁ₙ Lψₙ and bₙ N₁ₙ = aₙ (2k+m)^{−1/2}, so the
    // series equals (2k+m)^{−1/2} L Σ aₙ ℓⁿ ψₙ.
    let (series, n0, normalization) = match kind {
        TransformedKind::PhiN(n) => {
            return transformed_state(TransformedKind::PhiN(n), cfg, params, env, grid)
        }
        TransformedKind::PhiLambda(l) => (
            bg_state_series(l, max_terms, params, env, grid)?,
            bg_log_norm0(l, k)?.exp(),
            n1_lambda(l, k, m)?,
        ),
        TransformedKind::PhiZ(z) => (
            perelomov_state_series(z, max_terms, params, env, grid)?,
            perelomov_norm0(z, k)?,
            n1_z(z, k, m)?,
        ),
    };
    // series.wave = N₀ Σ aₙ ℓⁿ ψₙ
    let big_n = n0 * normalization * (2.0 * k + m as f64).sqrt();
    let sum_b_phi =
        apply_l(&series.wave, cfg, params, env)?.scale(c(1.0 / (n0 * (2.0 * k + m as f64).sqrt())));
    Ok(TransformedState {
        wave: sum_b_phi.scale(c(big_n)),
        kind,
        normalization,
    })
}

/// `p₀ψ = LL⁺ψ − (k+m)ψ`.
pub fn p_zero(
    w: &GridWave,
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
) -> Result<GridWave> {
    let llp = apply_l(&apply_l_dagger(w, cfg, params, env)?, cfg, params, env)?;
    llp.combine(c(1.0), w, c(-(params.k + cfg.m as f64)))
}

/// `p₊ψ = L k₊ L⁺ψ`.
pub fn p_plus(
    w: &GridWave,
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
) -> Result<GridWave> {
    apply_l(
        &k_plus(params, env, &apply_l_dagger(w, cfg, params, env)?)?,
        cfg,
        params,
        env,
    )
}

/// `p₋ψ = L k₋ L⁺ψ`.
pub fn p_minus(
    w: &GridWave,
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
) -> Result<GridWave> {
    apply_l(
        &k_minus(params, env, &apply_l_dagger(w, cfg, params, env)?)?,
        cfg,
        params,
        env,
    )
}

/// p-operator selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum POperator {
    P0,
    PPlus,
    PMinus,
}

pub fn p_operator(
    which: POperator,
    w: &GridWave,
    cfg: &DarbouxConfig,
    params: &PhysParams,
    env: &Envelope,
) -> Result<GridWave> {
    match which {
        POperator::P0 => p_zero(w, cfg, params, env),
        POperator::PPlus => p_plus(w, cfg, params, env),
        POperator::PMinus => p_minus(w, cfg, params, env),
    }
}

/// Eigenvalue of `[p₋, p₊]` on `φₙ`:
/// `2[k(1−k) + (k+m)p + 2p²](p + k + m)` at `p = n + k`.
pub fn polynomial_commutator_value(n: usize, k: f64, m: usize) -> f64 {
    let p = n as f64 + k;
    let m = m as f64;
    2.0 * (k * (1.0 - k) + (k + m) * p + 2.0 * p * p) * (p + k + m)
}

/// Signed ladder coefficient of `p±φₙ = s φₙ±₁`: `s = −c±ₙ / (N₁ₙ N₁ₙ±₁)`.
pub fn p_ladder_coefficient(n: usize, raising: bool, k: f64, m: usize) -> f64 {
    use crate::algebra::{c_minus, c_plus};
    if raising {
        -c_plus(n, k) / (n1_basis(n, k, m) * n1_basis(n + 1, k, m))
    } else if n == 0 {
        0.0
    } else {
        -c_minus(n, k) / (n1_basis(n, k, m) * n1_basis(n - 1, k, m))
    }
}

/// Direction of the holomorphic Darboux map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Holomorphic Darboux operators: `L(λ) = (m+2k)^{−1/2}[k₀(λ) − k − m]`,
/// i.e. `vₙ ↦ (m+2k)^{−1/2}(n−m)vₙ`, and `L⁺(λ) = (m+2k)^{1/2}`.
pub fn holo_darboux(
    v: &CoeffVector,
    direction: Direction,
    cfg: &DarbouxConfig,
    k: f64,
) -> CoeffVector {
    let s = (cfg.m as f64 + 2.0 * k).sqrt();
    match direction {
        Direction::Forward => CoeffVector {
            coeffs: v
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, x)| x * ((n as f64 - cfg.m as f64) / s))
                .collect(),
        },
        Direction::Backward => v.scale(c(s)),
    }
}

/// Holomorphic image of `φₙ`: `φₙ(λ) = √((n+2k+m)/(2k+m)) ψₙ(λ)`.
pub fn holo_transformed_basis(
    n: usize,
    len: usize,
    cfg: &DarbouxConfig,
    k: f64,
) -> Result<CoeffVector> {
    let e = CoeffVector::basis(n, len)?;
    Ok(e.scale(c(transformed_coefficient(1.0, n, k, cfg.m))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{envelope_at, Convention, FrequencyProfile};

    fn setup(t: f64) -> (PhysParams, Envelope, Arc<RadialGrid>) {
        let p = PhysParams::from_g(2.0).unwrap();
        let e = envelope_at(&FrequencyProfile::Zero, t, Convention::WronskianHalfI).unwrap();
        let g = Arc::new(RadialGrid::standard(30.0, 0.03).unwrap());
        (p, e, g)
    }

    #[test]
    fn m0_reduces_to_simple_form() {
        let (p, e, g) = setup(0.4);
        let cfg = DarbouxConfig::new(0);
        let a = potential_difference(&cfg, &p, &e, &g).unwrap();
        for (x, v) in g.points().iter().zip(&a) {
            let want = (4.0 * p.k - 1.0) / (x * x) - 1.0 / (4.0 * e.gamma);
            assert!((v - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn forward_map_kills_m() {
        let cfg = DarbouxConfig::new(2);
        let k = 1.25;
        let v = holo_darboux(
            &CoeffVector::basis(2, 6).unwrap(),
            Direction::Forward,
            &cfg,
            k,
        );
        assert_eq!(v.norm_sq(), 0.0);
        let w = CoeffVector::bg(c(0.8), 20, k).unwrap();
        let b = holo_darboux(&w, Direction::Backward, &cfg, k);
        assert!((b.norm_sq().sqrt() / w.norm_sq().sqrt() - (2.0 + 2.0 * k).sqrt()).abs() < 1e-14);
        assert_eq!(transformed_coefficient(1.0, 0, k, 2), 1.0);
    }

    #[test]
    fn z_zero_gives_phi0() {
        let (p, e, g) = setup(0.0);
        let cfg = DarbouxConfig::new(1);
        let a = transformed_state(TransformedKind::PhiZ(c(0.0)), &cfg, &p, &e, &g).unwrap();
        let b = transformed_state(TransformedKind::PhiN(0), &cfg, &p, &e, &g).unwrap();
        let d = a.wave.sub(&b.wave).unwrap();
        assert!(d.values.iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn negative_alpha_rejected() {
        let p = PhysParams::from_k(0.75).unwrap();
        assert!(DarbouxConfig::new(0).validate(&p).is_ok());
        let mut bad = p;
        bad.k = 0.4;
        assert!(DarbouxConfig::new(0).validate(&bad).is_err());
    }
}
