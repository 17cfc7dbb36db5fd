//! Quadrature on finite intervals and on the semi-axis `[a, ∞)`.
//!
//! The adaptive scheme is a global-subdivision Gauss–Kronrod 7/15 rule; on the
//! semi-axis it works in the compactified variable `x = a + s·t/(1−t)`. The
//! Gauss–Laguerre scheme integrates `∫₀^∞ f` as `∫ e^{−x/s} [e^{x/s} f]` with
//! 32, 64 and 128 nodes and uses the difference of the last two as its error
//! estimate.

use crate::prelude::*;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    AdaptiveSubdivision,
    GaussLaguerreMapped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureScheme {
    pub kind: QuadratureKind,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    /// Length scale of the semi-axis map (decay length of the integrand).
    pub scale: f64,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        QuadratureScheme {
            kind: QuadratureKind::AdaptiveSubdivision,
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_evals: 200_000,
            scale: 1.0,
        }
    }
}

impl QuadratureScheme {
    pub fn new(kind: QuadratureKind, abs_tol: f64, rel_tol: f64, max_evals: usize) -> Result<Self> {
        let scheme = QuadratureScheme {
            kind,
            abs_tol,
            rel_tol,
            max_evals,
            ..Default::default()
        };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("scale", self.scale),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain { what, value: v });
            }
        }
        Ok(())
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// An integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kron += (f1 + f2) * WGK[j];
        abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kron * half;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite("integrand"));
    }
    let diff = ((kron - gauss) * half).norm();
    let floor = 50.0 * f64::EPSILON * abs * half.abs();
    Ok(Panel {
        a,
        b,
        value,
        error: diff.max(floor),
    })
}

fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    scheme: &QuadratureScheme,
    initial: usize,
) -> Result<Estimate> {
    let mut panels = Vec::with_capacity(64);
    let width = (b - a) / initial as f64;
    for i in 0..initial {
        let lo = a + width * i as f64;
        let hi = if i + 1 == initial { b } else { lo + width };
        panels.push(gk15(f, lo, hi)?);
    }
    let mut evals = 15 * initial;
    loop {
        let value: Complex64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= scheme.target(value) {
            return Ok(Estimate {
                value,
                error,
                evals,
            });
        }
        if evals + 30 > scheme.max_evals {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                partial: value.re,
                error_estimate: error,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature (interval underflow)",
                partial: value.re,
                error_estimate: error,
            });
        }
        panels.push(gk15(f, p.a, mid)?);
        panels.push(gk15(f, mid, p.b)?);
        evals += 30;
    }
}

/// `∫_a^b f(x) dx` by adaptive Gauss–Kronrod subdivision.
pub fn integrate_interval<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    scheme: &QuadratureScheme,
) -> Result<Estimate> {
    scheme.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain {
            what: "integration bound",
            value: if a.is_finite() { b } else { a },
        });
    }
    if a == b {
        return Ok(Estimate {
            value: c(0.0),
            error: 0.0,
            evals: 0,
        });
    }
    adaptive(&f, a, b, scheme, 4)
}

/// `∫_a^∞ f(x) dx` by adaptive subdivision of the compactified variable.
pub fn integrate_tail<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    scheme: &QuadratureScheme,
) -> Result<Estimate> {
    scheme.validate()?;
    let s = scheme.scale;
    let g = |t: f64| {
        let om = 1.0 - t;
        let x = a + s * t / om;
        let v = f(x);
        if v == c(0.0) {
            v
        } else {
            v * (s / (om * om))
        }
    };
    adaptive(&g, 0.0, 1.0, scheme, 8)
}

/// `∫₀^∞ f(x) dx` with the scheme's method. `f` may have an integrable
/// algebraic singularity at the origin and must decay at infinity.
pub fn integrate_semiaxis<F: Fn(f64) -> Complex64>(
    f: F,
    scheme: &QuadratureScheme,
) -> Result<Estimate> {
    scheme.validate()?;
    match scheme.kind {
        QuadratureKind::AdaptiveSubdivision => integrate_tail(f, 0.0, scheme),
        QuadratureKind::GaussLaguerreMapped => gauss_laguerre(&f, scheme),
    }
}

/// Real-valued convenience wrapper around [`integrate_semiaxis`].
pub fn integrate_semiaxis_real<F: Fn(f64) -> f64>(f: F, scheme: &QuadratureScheme) -> Result<f64> {
    Ok(integrate_semiaxis(|x| c(f(x)), scheme)?.value.re)
}

/// Nodes and `e^{x}`-scaled weights of the n-point Gauss–Laguerre rule.
pub fn gauss_laguerre_rule(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut z = 0.0f64;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut converged = false;
        let mut pp = 0.0;
        let mut p2 = 0.0;
        for _ in 0..100 {
            // scaled recurrence: carry p·e^{-z/2} to avoid overflow
            let mut p1 = (-0.5 * z).exp();
            p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
            }
            pp = (nf * p1 - nf * p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "gauss_laguerre_rule",
                partial: z,
                error_estimate: f64::NAN,
            });
        }
        nodes[i] = z;
        // w·e^{z} = −e^{z}/(n·L'_n·L_{n−1}); the scale e^{−z/2} carried by
        // both factors supplies the e^{z}.
        weights[i] = -1.0 / (pp * nf * p2);
    }
    Ok((nodes, weights))
}

fn gauss_laguerre<F: Fn(f64) -> Complex64>(f: &F, scheme: &QuadratureScheme) -> Result<Estimate> {
    let s = scheme.scale;
    let mut previous: Option<Complex64> = None;
    let mut evals = 0;
    let mut last = c(0.0);
    let mut err = f64::INFINITY;
    for n in [32usize, 64, 128] {
        if evals + n > scheme.max_evals {
            break;
        }
        let (nodes, weights) = gauss_laguerre_rule(n)?;
        let mut sum = c(0.0);
        for (x, w) in nodes.iter().zip(&weights) {
            sum += f(s * x) * *w;
        }
        sum *= s;
        evals += n;
        if !(sum.re.is_finite() && sum.im.is_finite()) {
            return Err(Error::NonFinite("integrand"));
        }
        if let Some(p) = previous {
            err = (sum - p).norm();
            if err <= scheme.target(sum) {
                return Ok(Estimate {
                    value: sum,
                    error: err,
                    evals,
                });
            }
        }
        previous = Some(sum);
        last = sum;
    }
    Err(Error::NonConvergence {
        what: "gauss-laguerre quadrature",
        partial: last.re,
        error_estimate: err,
    })
}
