//! The su(1,1) symmetry generators.
//!
//! On grids, with `a = ε∂ₓ − (i/2)ε̇x` and `a⁺ = −ε̄∂ₓ + (i/2)ε̄̇x`,
//!
//! ```text
//! k₋ = 2[a² − ε² g/x²],   k₊ = 2[(a⁺)² − ε̄² g/x²],   k₀ = ½(k₋k₊ − k₊k₋).
//! ```
//!
//! They act on the bound basis as `k₀ψₙ = (n+k)ψₙ`, `k±ψₙ = −c±ₙ ψₙ±₁` with
//! `c⁺ₙ = √((n+1)(n+2k))`, `c⁻ₙ = √(n(n+2k−1))`.
//!
//! In the holomorphic representation a state `Σ cₙψₙ` is the function
//! `Σ aₙcₙλⁿ` (BG coefficients aₙ) and the generators become
//! `k₀ = λ d/dλ + k`, `k₊ = λ`, `k₋ = λ d²/dλ² + 2k d/dλ`.

use crate::envelope::{envelope_at, Convention, Envelope, FrequencyProfile};
use crate::numerics::{bessel_i_scaled_real, GridWave};
use crate::prelude::*;
use crate::states::{
    bg_coefficient, bg_log_norm0, perelomov_coefficient, perelomov_norm0, PhysParams,
};
use crate::{Error, Result};

/// Which operator a [`GridOperator`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorLabel {
    KMinus,
    KPlus,
    KZero,
    Hamiltonian,
}

/// A generator together with the parameters and envelope it is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOperator {
    pub label: OperatorLabel,
    pub params: PhysParams,
    pub env: Envelope,
}

impl GridOperator {
    pub fn new(label: OperatorLabel, params: PhysParams, env: Envelope) -> Self {
        GridOperator { label, params, env }
    }

    pub fn apply(&self, w: &GridWave) -> Result<GridWave> {
        apply_generator(self, w)
    }
}

/// `2[e²ψ'' − i e ė x ψ' − (i/2) e ė ψ − ¼ ė² x² ψ − e² g x⁻² ψ]`, which is
/// k₋ for `(e, ė) = (ε, ε̇)` and k₊ for `(e, ė) = (−ε̄, −ε̄̇)`.
///
/// The singular part `ψ'' − g x⁻²ψ` is applied in the factored form of
/// [`RadialGrid::singular_laplacian`](crate::numerics::RadialGrid::singular_laplacian),
/// which keeps compositions of several generators accurate near the origin.
fn ladder(e: Complex64, ed: Complex64, a: f64, w: &GridWave) -> Result<GridWave> {
    let d1 = w.grid.differentiate(&w.values, 1)?;
    let lap = w.grid.singular_laplacian(&w.values, a)?;
    let x = w.grid.points();
    let e2 = e * e;
    let eed = e * ed;
    let ed2 = ed * ed;
    let values = (0..x.len())
        .map(|j| {
            let xj = x[j];
            let v = w.values[j];
            (e2 * lap[j] - I * eed * xj * d1[j] - I * 0.5 * eed * v - 0.25 * ed2 * xj * xj * v)
                * 2.0
        })
        .collect();
    Ok(GridWave {
        untrusted: w.untrusted + 2 * w.grid.edge_width(),
        ..w.with_values(values)
    })
}

/// k₋ψ.
pub fn k_minus(params: &PhysParams, env: &Envelope, w: &GridWave) -> Result<GridWave> {
    ladder(env.eps, env.eps_dot, params.singular_exponent(), w)
}

/// k₊ψ.
pub fn k_plus(params: &PhysParams, env: &Envelope, w: &GridWave) -> Result<GridWave> {
    ladder(
        -env.eps.conj(),
        -env.eps_dot.conj(),
        params.singular_exponent(),
        w,
    )
}

/// k₀ψ as the half-commutator of the applied k₋ and k₊.
pub fn k_zero(params: &PhysParams, env: &Envelope, w: &GridWave) -> Result<GridWave> {
    let mp = k_minus(params, env, &k_plus(params, env, w)?)?;
    let pm = k_plus(params, env, &k_minus(params, env, w)?)?;
    Ok(mp.combine(c(0.5), &pm, c(-0.5))?)
}

/// `h₀ψ = −ψ'' + ω²x²ψ + g x⁻²ψ`.
pub fn hamiltonian(params: &PhysParams, env: &Envelope, w: &GridWave) -> Result<GridWave> {
    let lap = w
        .grid
        .singular_laplacian(&w.values, params.singular_exponent())?;
    let x = w.grid.points();
    let w2 = env.omega * env.omega;
    let values = (0..x.len())
        .map(|j| -lap[j] + w.values[j] * (w2 * x[j] * x[j]))
        .collect();
    Ok(GridWave {
        untrusted: w.untrusted + 2 * w.grid.edge_width(),
        ..w.with_values(values)
    })
}

/// Applies a generator on the wave's grid.
pub fn apply_generator(op: &GridOperator, w: &GridWave) -> Result<GridWave> {
    match op.label {
        OperatorLabel::KMinus => k_minus(&op.params, &op.env, w),
        OperatorLabel::KPlus => k_plus(&op.params, &op.env, w),
        OperatorLabel::KZero => k_zero(&op.params, &op.env, w),
        OperatorLabel::Hamiltonian => hamiltonian(&op.params, &op.env, w),
    }
}

/// `c⁺ₙ = √((n+1)(n+2k))`.
pub fn c_plus(n: usize, k: f64) -> f64 {
    let n = n as f64;
    ((n + 1.0) * (n + 2.0 * k)).sqrt()
}

/// `c⁻ₙ = √(n(n+2k−1))`.
pub fn c_minus(n: usize, k: f64) -> f64 {
    let n = n as f64;
    (n * (n + 2.0 * k - 1.0)).sqrt()
}

/// `|(3/16 − g/4) − k(1−k)|`: the two expressions of the Casimir value.
pub fn casimir_check(params: &PhysParams) -> f64 {
    ((3.0 / 16.0 - params.g / 4.0) - params.k * (1.0 - params.k)).abs()
}

/// Time step of the centred difference used by [`schrodinger_residual`].
pub const TIME_STEP: f64 = 1e-4;

/// `‖i∂ₜψ − (h₀ + V)ψ‖ / ‖ψ‖` at time `t`, where `state` builds ψ from an
/// envelope and `extra` optionally adds a potential `V(x)` sampled on the grid.
pub fn schrodinger_residual<F>(
    state: F,
    params: &PhysParams,
    profile: &FrequencyProfile,
    convention: Convention,
    t: f64,
    extra: Option<&[f64]>,
) -> Result<f64>
where
    F: Fn(&Envelope) -> Result<GridWave>,
{
    let env = envelope_at(profile, t, convention)?;
    let psi = state(&env)?;
    let fwd = state(&envelope_at(profile, t + TIME_STEP, convention)?)?;
    let bwd = state(&envelope_at(profile, t - TIME_STEP, convention)?)?;
    let dt = fwd.combine(c(1.0), &bwd, c(-1.0))?;
    let h = hamiltonian(params, &env, &psi)?;
    let mut r = dt.scale(I / (2.0 * TIME_STEP)).sub(&h)?;
    if let Some(v) = extra {
        if v.len() != psi.values.len() {
            return Err(Error::Grid("potential sample count does not match grid"));
        }
        for (j, rv) in r.values.iter_mut().enumerate() {
            *rv -= psi.values[j] * v[j];
        }
    }
    r.untrusted = h.untrusted;
    let mut reference = psi.clone();
    reference.untrusted = h.untrusted;
    Ok(r.norm() / reference.norm())
}

/// `⟨k₀⟩` in the BG state: `k + |λ| I_{2k}(2|λ|)/I_{2k−1}(2|λ|)`.
pub fn mean_k0(lambda: Complex64, k: f64) -> Result<f64> {
    check_k(k)?;
    Ok(k + mean_n(lambda.norm(), k)?)
}

/// `⟨k₀²⟩` in the BG state: `k² + |λ|² + |λ| I_{2k}(2|λ|)/I_{2k−1}(2|λ|)`.
pub fn mean_k0_sq(lambda: Complex64, k: f64) -> Result<f64> {
    check_k(k)?;
    let r = lambda.norm();
    Ok(k * k + r * r + mean_n(r, k)?)
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.5 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "k (need k > 1/2)",
            value: k,
        })
    }
}

/// `|λ| I_{2k}(2|λ|)/I_{2k−1}(2|λ|)`, the mean excitation number.
fn mean_n(r: f64, k: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(0.0);
    }
    let num = bessel_i_scaled_real(2.0 * k, 2.0 * r)?;
    let den = bessel_i_scaled_real(2.0 * k - 1.0, 2.0 * r)?;
    Ok(r * num / den)
}

/// Real `λ > 0` with `⟨k₀⟩ = k + 1` (equivalently a mean excitation number 1),
/// by bisection.
pub fn lambda_star(k: f64) -> Result<f64> {
    check_k(k)?;
    let f = |l: f64| mean_n(l, k).map(|v| v - 1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi)? < 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NonConvergence {
                what: "lambda_star bracket",
                partial: hi,
                error_estimate: f64::NAN,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Fourier coefficients `cₙ` of a state `Σ cₙψₙ` over the bound basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    pub coeffs: Vec<Complex64>,
}

/// Holomorphic generator labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoloOp {
    KZero,
    KPlus,
    KMinus,
}

impl CoeffVector {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Grid("empty coefficient vector"));
        }
        if coeffs
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite("coefficient vector"));
        }
        Ok(CoeffVector { coeffs })
    }

    /// Unit vector `e_n` in a truncation of `len` entries.
    pub fn basis(n: usize, len: usize) -> Result<Self> {
        if n >= len {
            return Err(Error::Grid("basis index beyond truncation"));
        }
        let mut v = vec![c(0.0); len];
        v[n] = c(1.0);
        Ok(CoeffVector { coeffs: v })
    }

    /// `cₙ = N₀λ aₙ λⁿ` for `n < len`.
    pub fn bg(lambda: Complex64, len: usize, k: f64) -> Result<Self> {
        let n0 = bg_log_norm0(lambda, k)?.exp();
        let mut p = c(1.0);
        let mut v = Vec::with_capacity(len);
        for n in 0..len {
            v.push(p * n0 * bg_coefficient(n, k)?);
            p *= lambda;
        }
        Self::new(v)
    }

    /// `cₙ = N₀z aₙ zⁿ` (Perelomov coefficients) for `n < len`.
    pub fn perelomov(z: Complex64, len: usize, k: f64) -> Result<Self> {
        let n0 = perelomov_norm0(z, k)?;
        let mut p = c(1.0);
        let mut v = Vec::with_capacity(len);
        for n in 0..len {
            v.push(p * n0 * perelomov_coefficient(n, k)?);
            p *= z;
        }
        Self::new(v)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ|cₙ|²`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `Σ conj(selfₙ) otherₙ` over the common length.
    pub fn inner(&self, other: &CoeffVector) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|c_{N−1}|`, the size of the last retained coefficient.
    pub fn tail(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1].norm()
    }

    /// Taylor coefficients `vₙ = aₙ cₙ` of the holomorphic function.
    pub fn to_taylor(&self, k: f64) -> Result<Vec<Complex64>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, v)| Ok(v * bg_coefficient(n, k)?))
            .collect()
    }

    /// Inverse of [`CoeffVector::to_taylor`].
    pub fn from_taylor(v: &[Complex64], k: f64) -> Result<Self> {
        let coeffs = v
            .iter()
            .enumerate()
            .map(|(n, t)| Ok(t / bg_coefficient(n, k)?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }

    pub fn combine(&self, a: Complex64, other: &CoeffVector, b: Complex64) -> CoeffVector {
        let n = self.len().max(other.len());
        let get = |v: &CoeffVector, i: usize| v.coeffs.get(i).copied().unwrap_or(c(0.0));
        CoeffVector {
            coeffs: (0..n)
                .map(|i| get(self, i) * a + get(other, i) * b)
                .collect(),
        }
    }

    pub fn scale(&self, a: Complex64) -> CoeffVector {
        CoeffVector {
            coeffs: self.coeffs.iter().map(|v| v * a).collect(),
        }
    }
}

/// Action of a holomorphic generator, computed on the Taylor coefficients:
/// `(k₀v)ₙ = (n+k)vₙ`, `(k₊v)ₙ = vₙ₋₁`, `(k₋v)ₙ = (n+1)(n+2k)vₙ₊₁`.
/// The result has the input's length: `k₊` drops the overflowing top
/// coefficient and `k₋` treats `v_N` as zero, so the last entry is inexact.
pub fn holo_generator(op: HoloOp, v: &CoeffVector, k: f64) -> Result<CoeffVector> {
    let t = v.to_taylor(k)?;
    let n = t.len();
    let out: Vec<Complex64> = (0..n)
        .map(|j| {
            let jf = j as f64;
            match op {
                HoloOp::KZero => t[j] * (jf + k),
                HoloOp::KPlus => {
                    if j == 0 {
                        c(0.0)
                    } else {
                        t[j - 1]
                    }
                }
                HoloOp::KMinus => {
                    if j + 1 < n {
                        t[j + 1] * ((jf + 1.0) * (jf + 2.0 * k))
                    } else {
                        c(0.0)
                    }
                }
            }
        })
        .collect();
    CoeffVector::from_taylor(&out, k)
}

/// Matrix element `⟨e_n| op |e_m⟩` in coefficient space.
pub fn holo_matrix_element(op: HoloOp, n: usize, m: usize, k: f64) -> Result<Complex64> {
    let len = n.max(m) + 2;
    let v = holo_generator(op, &CoeffVector::basis(m, len)?, k)?;
    Ok(v.coeffs[n])
}
