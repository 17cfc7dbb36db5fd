//! Exact solutions of `i∂ₜψ = h₀ψ`: the separated basis ψₙ and the
//! Barut–Girardello (ψ_λ) and Perelomov (ψ_z) coherent states.
//!
//! All states are written through `γ = |ε|²`, `γ̇` and the continuous phase
//! θ = arg ε of the [`Envelope`], with `y = x/(2√γ)`:
//!
//! ```text
//! ψₙ = Nₙ γ^{-1/4} e^{-2iλθ} y^{α+1/2} e^{(∓1/4 + iγ̇/2) y²} L^α_n(±y²/2)
//! ```
//!
//! The bound branch (lower sign, α = 2k−1, λ = n+k) is normalized by
//! `Nₙ = 2^{-k} √(n!/Γ(n+2k))`. The virtual branch (upper sign) grows like a
//! Gaussian and is returned unnormalized.

use alloc::sync::Arc;

use crate::envelope::Envelope;
use crate::numerics::{bessel_i_entire_scaled, gamma_ln, laguerre, GridWave, RadialGrid};
use crate::prelude::*;
use crate::{Error, Result};

/// Largest truncation accepted by the series forms.
pub const MAX_SERIES_TERMS: usize = 2000;

/// Default tail bound for the series forms.
pub const SERIES_TAIL: f64 = 1e-12;

/// Coupling `g` of `g/x²` and the representation label `k`, related by
/// `g = 3/4 + 4k(k−1)`, `k = 1/2 + √(1+4g)/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub g: f64,
    pub k: f64,
    /// Index of the Darboux transformation function.
    pub m_darboux: usize,
}

impl PhysParams {
    pub fn from_g(g: f64) -> Result<Self> {
        if !(g > -0.25) || !g.is_finite() {
            return Err(Error::Domain {
                what: "coupling g (need g > -1/4)",
                value: g,
            });
        }
        Ok(PhysParams {
            g,
            k: 0.5 + 0.25 * (1.0 + 4.0 * g).sqrt(),
            m_darboux: 0,
        })
    }

    pub fn from_k(k: f64) -> Result<Self> {
        if !(k > 0.5) || !k.is_finite() {
            return Err(Error::Domain {
                what: "representation label k (need k > 1/2)",
                value: k,
            });
        }
        Ok(PhysParams {
            g: 0.75 + 4.0 * k * (k - 1.0),
            k,
            m_darboux: 0,
        })
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m_darboux = m;
        self
    }

    /// `α = 2k − 1`.
    pub fn alpha(&self) -> f64 {
        2.0 * self.k - 1.0
    }

    /// Small-x exponent `a = 2k − ½` of the bound states, the root of
    /// `a(a−1) = g` with `a > ½`.
    pub fn singular_exponent(&self) -> f64 {
        2.0 * self.k - 0.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Bound,
    VirtualUpper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisIndex {
    pub n: usize,
    pub branch: Branch,
    pub alpha: f64,
}

impl BasisIndex {
    pub fn bound(n: usize, params: &PhysParams) -> Self {
        BasisIndex {
            n,
            branch: Branch::Bound,
            alpha: params.alpha(),
        }
    }

    /// Virtual solution with `α = ±(2k−1)` (`positive` selects the sign).
    pub fn virtual_upper(n: usize, params: &PhysParams, positive: bool) -> Self {
        let a = params.alpha();
        BasisIndex {
            n,
            branch: Branch::VirtualUpper,
            alpha: if positive { a } else { -a },
        }
    }

    fn validate(&self, params: &PhysParams) -> Result<()> {
        let a = params.alpha();
        let ok = match self.branch {
            Branch::Bound => (self.alpha - a).abs() <= 1e-12 * a.abs().max(1.0),
            Branch::VirtualUpper => (self.alpha.abs() - a.abs()).abs() <= 1e-12 * a.abs().max(1.0),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain {
                what: "basis alpha must be ±(2k−1)",
                value: self.alpha,
            })
        }
    }

    /// Separation constant λ, the exponent of `(ε̄/ε)`.
    pub fn separation_constant(&self, k: f64) -> f64 {
        let n = self.n as f64;
        match self.branch {
            Branch::Bound => n + k,
            Branch::VirtualUpper if self.alpha >= 0.0 => -(k + n),
            Branch::VirtualUpper => k - n - 1.0,
        }
    }
}

/// `ln Nₙ` of the bound basis.
pub fn basis_log_norm(n: usize, k: f64) -> Result<f64> {
    Ok(-k * core::f64::consts::LN_2
        + 0.5 * (gamma_ln(n as f64 + 1.0)? - gamma_ln(n as f64 + 2.0 * k)?))
}

/// Normalization constant of a basis solution; virtual solutions are not
/// square integrable.
pub fn normalization_constant(idx: &BasisIndex, params: &PhysParams) -> Result<f64> {
    idx.validate(params)?;
    match idx.branch {
        Branch::Bound => Ok(basis_log_norm(idx.n, params.k)?.exp()),
        Branch::VirtualUpper => Err(Error::NotNormalizable),
    }
}

/// Pointwise value of a basis solution.
pub fn basis_value(
    idx: &BasisIndex,
    params: &PhysParams,
    env: &Envelope,
    x: f64,
) -> Result<Complex64> {
    idx.validate(params)?;
    let norm = match idx.branch {
        Branch::Bound => basis_log_norm(idx.n, params.k)?.exp(),
        Branch::VirtualUpper => 1.0,
    };
    Ok(basis_value_raw(idx, params.k, env, x) * norm)
}

fn basis_value_raw(idx: &BasisIndex, k: f64, env: &Envelope, x: f64) -> Complex64 {
    let y = x / (2.0 * env.gamma.sqrt());
    let y2 = y * y;
    let (sign, arg) = match idx.branch {
        Branch::Bound => (-0.25, 0.5 * y2),
        Branch::VirtualUpper => (0.25, -0.5 * y2),
    };
    let lam = idx.separation_constant(k);
    let gauss = Complex64::new(sign * y2, 0.5 * env.gamma_dot * y2).exp();
    let lag = laguerre(idx.n, idx.alpha, c(arg));
    env.phase_power(lam) * (env.gamma.powf(-0.25) * y.powf(idx.alpha + 0.5)) * gauss * lag
}

/// ψₙ sampled on a grid (normalized for the bound branch).
pub fn basis_state(
    idx: &BasisIndex,
    params: &PhysParams,
    env: &Envelope,
    grid: &Arc<RadialGrid>,
) -> Result<GridWave> {
    idx.validate(params)?;
    let norm = match idx.branch {
        Branch::Bound => basis_log_norm(idx.n, params.k)?.exp(),
        Branch::VirtualUpper => 1.0,
    };
    GridWave::from_fn(grid.clone(), env.t, |x| {
        basis_value_raw(idx, params.k, env, x) * norm
    })
}

/// BG coefficient `aₙ = (−1)ⁿ √(Γ(2k)/(n! Γ(n+2k)))`.
pub fn bg_coefficient(n: usize, k: f64) -> Result<f64> {
    let mag = (0.5
        * (gamma_ln(2.0 * k)? - gamma_ln(n as f64 + 1.0)? - gamma_ln(n as f64 + 2.0 * k)?))
    .exp();
    Ok(if n % 2 == 0 { mag } else { -mag })
}

/// Perelomov coefficient `aₙ = √(Γ(n+2k)/(n! Γ(2k)))`.
pub fn perelomov_coefficient(n: usize, k: f64) -> Result<f64> {
    Ok(
        (0.5 * (gamma_ln(n as f64 + 2.0 * k)? - gamma_ln(n as f64 + 1.0)? - gamma_ln(2.0 * k)?))
            .exp(),
    )
}

/// `ln N₀λ` with `N₀λ = [Γ(2k) Ĩ_{2k−1}(4|λ|²)]^{−1/2}`, which equals the
/// series normalization `|λ|^{k−1/2} I_{2k−1}(2|λ|)^{−1/2} Γ(2k)^{−1/2}`.
pub fn bg_log_norm0(lambda: Complex64, k: f64) -> Result<f64> {
    let r = lambda.norm();
    let scaled = bessel_i_entire_scaled(2.0 * k - 1.0, c(4.0 * r * r))?.re;
    Ok(-0.5 * (gamma_ln(2.0 * k)? + scaled.ln() + 2.0 * r))
}

/// `N₀z = (1 − |z|²)^k`.
pub fn perelomov_norm0(z: Complex64, k: f64) -> Result<f64> {
    check_disc(z)?;
    Ok((1.0 - z.norm_sqr()).powf(k))
}

fn check_disc(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "Perelomov label |z| < 1",
            value: z.norm(),
        })
    }
}

fn check_label(l: Complex64) -> Result<()> {
    if l.re.is_finite() && l.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("coherent-state label"))
    }
}

/// Coherent-state label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoherentLabel {
    Bg(Complex64),
    Perelomov(Complex64),
}

impl CoherentLabel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CoherentLabel::Bg(l) => check_label(l),
            CoherentLabel::Perelomov(z) => {
                check_label(z)?;
                check_disc(z)
            }
        }
    }
}

/// Closed-form BG state at one point:
///
/// ```text
/// ψ_λ = (2ε)^{-1} I_ν(2|λ|)^{-1/2} √x I_ν(μx/ε) e^{−x²/(16γ) + iγ̇x²/(8γ)} e^{−2ε̄μ²/ε},
/// μ² = λ/2,  ν = 2k − 1.
/// ```
///
/// The phases are fixed by `μ^ν = |μ|^ν e^{iν arg(λ)/2}` and
/// `ε^{-ν} = |ε|^{-ν} e^{-iνθ}`, which makes ψ_λ equal to
/// `e^{iν arg(λ)/2}` times the series form.
pub fn bg_value_closed(lambda: Complex64, k: f64, env: &Envelope, x: f64) -> Result<Complex64> {
    check_label(lambda)?;
    let nu = 2.0 * k - 1.0;
    let eps = env.eps;
    let w = (lambda * 0.5).sqrt() * x / eps;
    let it = bessel_i_entire_scaled(nu, w * w)?;
    let g = env.gamma;
    let exponent = Complex64::new(
        w.re.abs() - x * x / (16.0 * g),
        env.gamma_dot * x * x / (8.0 * g),
    ) - eps.conj() / eps * lambda
        + bg_log_norm0(lambda, k)?
        + 0.5 * gamma_ln(2.0 * k)?;
    // ½ γ^{−1/2} e^{−iθ} · (x/2)^ν γ^{−ν/2} e^{−iνθ} · 2^{−ν/2} e^{iν arg(λ)/2}
    let arg_l = if lambda == c(0.0) { 0.0 } else { lambda.arg() };
    let pre = Complex64::from_polar(
        0.5 * g.powf(-0.5 * (nu + 1.0)) * (0.5 * x).powf(nu) * 2f64.powf(-0.5 * nu) * x.sqrt(),
        -(nu + 1.0) * env.theta + 0.5 * nu * arg_l,
    );
    Ok(pre * it * exponent.exp())
}

/// Closed-form BG state on a grid.
pub fn bg_state_closed(
    lambda: Complex64,
    params: &PhysParams,
    env: &Envelope,
    grid: &Arc<RadialGrid>,
) -> Result<GridWave> {
    let values = grid
        .points()
        .iter()
        .map(|&x| bg_value_closed(lambda, params.k, env, x))
        .collect::<Result<Vec<_>>>()?;
    GridWave::new(grid.clone(), values, env.t)
}

/// A truncated-series state with its truncation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesWave {
    pub wave: GridWave,
    pub terms: usize,
    /// Magnitude of the first omitted coefficient (each ψₙ has unit norm).
    pub tail: f64,
}

/// `Σ cₙ ψₙ(x)` over the bound basis with coefficient magnitudes in log form.
/// `coeffs[n]` multiplies the *unnormalized* Laguerre term and already
/// contains `Nₙ e^{−2i(n+k)θ}`.
fn bound_series_on_grid(
    coeffs: &[Complex64],
    k: f64,
    env: &Envelope,
    grid: &Arc<RadialGrid>,
) -> Result<GridWave> {
    let alpha = 2.0 * k - 1.0;
    let g = env.gamma;
    GridWave::from_fn(grid.clone(), env.t, |x| {
        let y = x / (2.0 * g.sqrt());
        let y2 = y * y;
        let z = 0.5 * y2;
        let mut prev = 0.0;
        let mut cur = 1.0;
        let mut sum = coeffs[0];
        for (j, cn) in coeffs.iter().enumerate().skip(1) {
            let jf = (j - 1) as f64;
            let next = ((2.0 * jf + 1.0 + alpha - z) * cur - (jf + alpha) * prev) / (jf + 1.0);
            prev = cur;
            cur = next;
            sum += cn * cur;
        }
        let gauss = Complex64::new(-0.25 * y2, 0.5 * env.gamma_dot * y2).exp();
        sum * gauss * (g.powf(-0.25) * y.powf(alpha + 0.5))
    })
}

/// Truncate `Σ_n w(n)` once `|w(n)|` has dropped below `tol` and is
/// decreasing; returns the number of terms and the first omitted magnitude.
fn truncation<F: Fn(usize) -> Result<f64>>(
    mag: F,
    max_terms: usize,
    tol: f64,
) -> Result<(usize, f64)> {
    let mut last = f64::INFINITY;
    for n in 0..max_terms.min(MAX_SERIES_TERMS) {
        let m = mag(n)?;
        if m < tol && m <= last {
            return Ok((n, m));
        }
        last = m;
    }
    Err(Error::Truncation {
        terms: max_terms,
        tail: last,
    })
}

/// BG state from its Fourier series `N₀λ Σ aₙ λⁿ ψₙ`, using at most
/// `max_terms` terms.
pub fn bg_state_series(
    lambda: Complex64,
    max_terms: usize,
    params: &PhysParams,
    env: &Envelope,
    grid: &Arc<RadialGrid>,
) -> Result<SeriesWave> {
    check_label(lambda)?;
    let k = params.k;
    let ln0 = bg_log_norm0(lambda, k)?;
    let lr = lambda.norm();
    let log_mag = |n: usize| -> Result<f64> {
        let la =
            0.5 * (gamma_ln(2.0 * k)? - gamma_ln(n as f64 + 1.0)? - gamma_ln(n as f64 + 2.0 * k)?);
        Ok(ln0 + la + if n == 0 { 0.0 } else { n as f64 * lr.ln() })
    };
    let (terms, tail) = truncation(|n| Ok(log_mag(n)?.exp()), max_terms, SERIES_TAIL)?;
    let terms = terms.max(1);
    let mut coeffs = Vec::with_capacity(terms);
    for n in 0..terms {
        let mag = (log_mag(n)? + basis_log_norm(n, k)?).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let phase = if n == 0 {
            c(1.0)
        } else {
            (lambda / lr).powu(n as u32)
        };
        coeffs.push(phase * env.phase_power(n as f64 + k) * (sign * mag));
    }
    Ok(SeriesWave {
        wave: bound_series_on_grid(&coeffs, k, env, grid)?,
        terms,
        tail,
    })
}

/// Closed-form Perelomov state at one point, with `ζ = z ε̄/ε`:
///
/// ```text
/// ψ_z = 2^{1/2−3k} Γ(2k)^{−1/2} ε^{−2k} x^{2k−1/2} (1−|ζ|²)^k (1−ζ)^{−2k}
///       · exp[−x²(1+ζ)/(16γ(1−ζ)) + iγ̇x²/(8γ)]
/// ```
///
/// with the continuous branch for `ε^{−2k}` and the principal branch for
/// `(1−ζ)^{−2k}` (`Re(1−ζ) > 0`).
pub fn perelomov_value(z: Complex64, k: f64, env: &Envelope, x: f64) -> Result<Complex64> {
    check_label(z)?;
    check_disc(z)?;
    let g = env.gamma;
    let zeta = z * env.phase_power(1.0);
    let om = c(1.0) - zeta;
    let exponent = Complex64::new(0.0, env.gamma_dot * x * x / (8.0 * g))
        - (c(1.0) + zeta) / om * (x * x / (16.0 * g))
        - om.ln() * (2.0 * k)
        + c(k * (1.0 - zeta.norm_sqr()).ln() - 0.5 * gamma_ln(2.0 * k)?);
    let pre = 2f64.powf(0.5 - 3.0 * k) * x.powf(2.0 * k - 0.5);
    Ok(env.eps_power(-2.0 * k) * pre * exponent.exp())
}

/// Closed-form Perelomov state on a grid.
pub fn perelomov_state(
    z: Complex64,
    params: &PhysParams,
    env: &Envelope,
    grid: &Arc<RadialGrid>,
) -> Result<GridWave> {
    let values = grid
        .points()
        .iter()
        .map(|&x| perelomov_value(z, params.k, env, x))
        .collect::<Result<Vec<_>>>()?;
    GridWave::new(grid.clone(), values, env.t)
}

/// Perelomov state from its Fourier series `N₀z Σ aₙ zⁿ ψₙ`.
pub fn perelomov_state_series(
    z: Complex64,
    max_terms: usize,
    params: &PhysParams,
    env: &Envelope,
    grid: &Arc<RadialGrid>,
) -> Result<SeriesWave> {
    check_label(z)?;
    check_disc(z)?;
    let k = params.k;
    let n0 = perelomov_norm0(z, k)?;
    let zr = z.norm();
    let mag = |n: usize| -> Result<f64> {
        Ok(n0 * perelomov_coefficient(n, k)? * if n == 0 { 1.0 } else { zr.powi(n as i32) })
    };
    let (terms, tail) = truncation(mag, max_terms, SERIES_TAIL)?;
    let terms = terms.max(1);
    let mut coeffs = Vec::with_capacity(terms);
    for n in 0..terms {
        let m = mag(n)? * basis_log_norm(n, k)?.exp();
        let phase = if n == 0 {
            c(1.0)
        } else {
            (z / zr).powu(n as u32)
        };
        coeffs.push(phase * env.phase_power(n as f64 + k) * m);
    }
    Ok(SeriesWave {
        wave: bound_series_on_grid(&coeffs, k, env, grid)?,
        terms,
        tail,
    })
}

/// Evaluates any of the coherent states by its closed form.
pub fn coherent_state(
    label: CoherentLabel,
    params: &PhysParams,
    env: &Envelope,
    grid: &Arc<RadialGrid>,
) -> Result<GridWave> {
    label.validate()?;
    match label {
        CoherentLabel::Bg(l) => bg_state_closed(l, params, env, grid),
        CoherentLabel::Perelomov(z) => perelomov_state(z, params, env, grid),
    }
}

/// Norm, mean position and width of `|ψ|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMoments {
    pub norm: f64,
    pub mean_x: f64,
    pub sigma_x: f64,
}

/// `∫|ψ|²`, `⟨x⟩` and `σ_x = √(⟨x²⟩ − ⟨x⟩²)` with moments of the normalized
/// density.
pub fn density_moments(w: &GridWave) -> Result<DensityMoments> {
    let x = w.grid.points();
    let wt = w.grid.weights();
    let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for i in w.trusted() {
        let d = w.values[i].norm_sqr() * wt[i];
        m0 += d;
        m1 += d * x[i];
        m2 += d * x[i] * x[i];
    }
    if !(m0 > 0.0) || !m0.is_finite() || !m2.is_finite() {
        return Err(Error::NonFinite("density moments"));
    }
    let mean = m1 / m0;
    let var = (m2 / m0 - mean * mean).max(0.0);
    Ok(DensityMoments {
        norm: m0,
        mean_x: mean,
        sigma_x: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{envelope_at, Convention, FrequencyProfile};

    fn setup(t: f64, conv: Convention) -> (PhysParams, Envelope, Arc<RadialGrid>) {
        let p = PhysParams::from_g(2.0).unwrap();
        let e = envelope_at(&FrequencyProfile::Zero, t, conv).unwrap();
        let g = Arc::new(RadialGrid::standard(60.0, 0.02).unwrap());
        (p, e, g)
    }

    #[test]
    fn params_relation() {
        let p = PhysParams::from_g(2.0).unwrap();
        assert_eq!(p.k, 1.25);
        let q = PhysParams::from_k(p.k).unwrap();
        assert!((q.g - 2.0).abs() < 1e-12);
        assert!(PhysParams::from_g(-0.3).is_err());
    }

    #[test]
    fn coefficients() {
        let k = 1.25;
        assert!((bg_coefficient(1, k).unwrap() + 1.0 / (2.0 * k).sqrt()).abs() < 1e-15);
        for n in 1..30 {
            let lhs =
                bg_coefficient(n, k).unwrap() * ((n as f64) * (n as f64 + 2.0 * k - 1.0)).sqrt();
            assert!((lhs + bg_coefficient(n - 1, k).unwrap()).abs() < 1e-14);
        }
        assert!(
            (bg_log_norm0(c(0.0), k).unwrap() + 0.5 * gamma_ln(2.5).unwrap()
                - 0.5 * gamma_ln(2.5).unwrap())
            .abs()
                < 1e-14
        );
    }

    #[test]
    fn unit_norm_and_orthogonality() {
        let (p, e, g) = setup(0.0, Convention::PaperFreeParticle);
        let s0 = basis_state(&BasisIndex::bound(0, &p), &p, &e, &g).unwrap();
        let s1 = basis_state(&BasisIndex::bound(1, &p), &p, &e, &g).unwrap();
        assert!((s0.norm_sq() - 1.0).abs() < 1e-8);
        assert!(s0.inner(&s1).unwrap().norm() < 1e-8);
    }

    #[test]
    fn virtual_states_are_nodeless_and_not_normalizable() {
        let (p, e, _) = setup(0.5, Convention::WronskianHalfI);
        // the virtual branch grows like e^{y²/4}; stay below overflow
        let g = Arc::new(RadialGrid::standard(20.0, 0.02).unwrap());
        for n in 0..5 {
            let idx = BasisIndex::virtual_upper(n, &p, true);
            assert!(matches!(
                normalization_constant(&idx, &p),
                Err(Error::NotNormalizable)
            ));
            let w = basis_state(&idx, &p, &e, &g).unwrap();
            assert!(w.values.iter().all(|v| v.norm() > 0.0));
        }
    }

    #[test]
    fn bg_closed_form_matches_series() {
        for conv in [Convention::WronskianHalfI, Convention::PaperFreeParticle] {
            for t in [0.0, 1.0] {
                let (p, e, g) = setup(t, conv);
                for lambda in [c(1.021), Complex64::new(0.5, 0.3), c(-0.7)] {
                    let a = bg_state_closed(lambda, &p, &e, &g).unwrap();
                    let b = bg_state_series(lambda, 80, &p, &e, &g).unwrap();
                    let phase = Complex64::from_polar(1.0, 0.5 * (2.0 * p.k - 1.0) * lambda.arg());
                    let err = a
                        .values
                        .iter()
                        .zip(&b.wave.values)
                        .map(|(u, v)| (u - v * phase).norm())
                        .fold(0.0, f64::max);
                    assert!(err < 1e-8, "conv {conv:?} t {t} λ {lambda}: {err}");
                    assert!((a.norm_sq() - 1.0).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn perelomov_closed_form_matches_series() {
        for conv in [Convention::WronskianHalfI, Convention::PaperFreeParticle] {
            for t in [0.0, 0.5, 2.0] {
                let (p, e, g) = setup(t, conv);
                for z in [c(1.0 / 3.5f64.sqrt()), Complex64::new(0.3, -0.4), c(0.0)] {
                    let a = perelomov_state(z, &p, &e, &g).unwrap();
                    let b = perelomov_state_series(z, 400, &p, &e, &g).unwrap();
                    let err = a
                        .sub(&b.wave)
                        .unwrap()
                        .values
                        .iter()
                        .map(|v| v.norm())
                        .fold(0.0, f64::max);
                    assert!(err < 1e-8, "{conv:?} {t} {z}: {err}");
                    assert!((a.norm_sq() - 1.0).abs() < 1e-7);
                }
            }
        }
        let (p, e, g) = setup(0.0, Convention::WronskianHalfI);
        assert!(perelomov_state(c(1.0), &p, &e, &g).is_err());
    }

    #[test]
    fn density_moments_scaling() {
        let (p, e, g) = setup(0.0, Convention::PaperFreeParticle);
        let w = basis_state(&BasisIndex::bound(0, &p), &p, &e, &g).unwrap();
        let a = density_moments(&w).unwrap();
        let b = density_moments(&w.scale(c(2.0))).unwrap();
        assert!((b.norm - 4.0 * a.norm).abs() < 1e-12);
        assert!((b.sigma_x - a.sigma_x).abs() < 1e-12);
    }
}
