//! Verification suites: every closed-form identity re-checked numerically.
//!
//! Each check yields one [`Check`] line (name, measured value, tolerance,
//! PASS/FAIL). Dynamics and algebra run under the wronskian convention, where
//! the closed forms solve the Schrödinger equation; normalization checks run
//! under both conventions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use singosc_core::algebra::{
    c_minus, c_plus, casimir_check, holo_generator, k_minus, k_plus, k_zero, lambda_star, mean_k0,
    mean_k0_sq, schrodinger_residual, CoeffVector, HoloOp,
};
use singosc_core::darboux::{
    apply_l, apply_l_dagger, holo_darboux, holo_transformed_basis, p_minus, p_operator, p_plus,
    p_zero, polynomial_commutator_value, potential_difference, potential_difference_numeric,
    reality_condition_check, transformed_state, transformed_state_series, DarbouxConfig, Direction,
    POperator, TransformedKind,
};
use singosc_core::envelope::{envelope_at, Convention, Envelope, FrequencyProfile};
use singosc_core::measures::{
    f_moment, identity_resolution_check, kernel_point_evaluation, PhiTable, RadialMeasure,
};
use singosc_core::numerics::{gamma_ln, GridWave, QuadratureScheme, RadialGrid};
use singosc_core::states::{
    basis_state, bg_state_closed, bg_state_series, perelomov_state, perelomov_state_series,
    BasisIndex, PhysParams,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    States,
    Algebra,
    Darboux,
    Measures,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "all" => Some(Suite::All),
            "states" => Some(Suite::States),
            "algebra" => Some(Suite::Algebra),
            "darboux" => Some(Suite::Darboux),
            "measures" => Some(Suite::Measures),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Reported, not graded.
    Info,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Acceptance criterion the check belongs to.
    pub criterion: u8,
    pub value: f64,
    pub tol: f64,
    pub status: Status,
}

impl Check {
    /// `value ≤ tol` (NaN fails).
    fn le(name: impl Into<String>, criterion: u8, value: f64, tol: f64) -> Self {
        let status = if value <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            name: name.into(),
            criterion,
            value,
            tol,
            status,
        }
    }

    fn info(name: impl Into<String>, criterion: u8, value: f64) -> Self {
        Check {
            name: name.into(),
            criterion,
            value,
            tol: f64::NAN,
            status: Status::Info,
        }
    }

    /// Re-grades against a different tolerance (informational lines stay so).
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        if self.status != Status::Info {
            self.tol = tol;
            self.status = if self.value <= tol {
                Status::Pass
            } else {
                Status::Fail
            };
        }
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        };
        if self.status == Status::Info {
            write!(
                f,
                "{status} {} value={:.6e} criterion={}",
                self.name, self.value, self.criterion
            )
        } else {
            write!(
                f,
                "{status} {} value={:.3e} tol={:.1e} criterion={}",
                self.name, self.value, self.tol, self.criterion
            )
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn criterion(&self, n: u8) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(move |c| c.criterion == n)
    }
}

const WR: Convention = Convention::WronskianHalfI;
const TIMES: [f64; 3] = [0.0, 1.0, 2.0];
const FIGURE_LAMBDA: f64 = 1.021;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn env(t: f64, conv: Convention) -> Result<Envelope, CliError> {
    Ok(envelope_at(&FrequencyProfile::Zero, t, conv)?)
}

fn default_z(k: f64) -> Complex64 {
    c((2.0 * k + 1.0).powf(-0.5))
}

fn tag(conv: Convention) -> &'static str {
    crate::config::convention_name(conv)
}

/// `‖lhs − rhs‖/‖rhs‖` on the support window of `reference` intersected
/// with the trusted range of `lhs`.
fn rel(lhs: &GridWave, rhs: &GridWave, reference: &GridWave, floor: f64) -> Result<f64, CliError> {
    let mut r = reference.support(floor);
    let t = lhs.trusted();
    r.start = r.start.max(t.start);
    r.end = r.end.min(t.end).max(r.start);
    Ok(lhs.relative_distance(rhs, r)?)
}

/// Runs one suite with parameters `g` (checks are defined for the figure
/// setup, g = 2).
pub fn run(suite: Suite, g: f64) -> Result<Report, CliError> {
    let p = PhysParams::from_g(g)?;
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::States {
        states_suite(&p, &mut out)?;
    }
    if all || suite == Suite::Algebra {
        algebra_suite(&p, &mut out)?;
    }
    if all || suite == Suite::Darboux {
        darboux_suite(&p, &mut out)?;
    }
    if all || suite == Suite::Measures {
        measures_suite(&p, &mut out)?;
    }
    Ok(Report { checks: out })
}

fn states_grid() -> Result<Arc<RadialGrid>, CliError> {
    Ok(Arc::new(RadialGrid::standard(60.0, 0.02)?))
}

pub fn states_suite(p: &PhysParams, out: &mut Vec<Check>) -> Result<(), CliError> {
    let g = states_grid()?;
    for conv in [Convention::PaperFreeParticle, WR] {
        for t in TIMES {
            let e = env(t, conv)?;
            let psis = (0..=10)
                .map(|n| basis_state(&BasisIndex::bound(n, p), p, &e, &g))
                .collect::<Result<Vec<_>, _>>()?;
            let mut worst: f64 = 0.0;
            for (i, a) in psis.iter().enumerate() {
                for (j, b) in psis.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((a.inner(b)? - c(want)).norm());
                }
            }
            out.push(Check::le(
                format!("states.orthonormality[{},t={t}]", tag(conv)),
                2,
                worst,
                1e-7,
            ));

            let lambda = c(FIGURE_LAMBDA);
            let z = default_z(p.k);
            let bg = bg_state_closed(lambda, p, &e, &g)?;
            let pz = perelomov_state(z, p, &e, &g)?;
            let nerr = (bg.norm_sq() - 1.0).abs().max((pz.norm_sq() - 1.0).abs());
            out.push(Check::le(
                format!("states.coherent_norm[{},t={t}]", tag(conv)),
                2,
                nerr,
                1e-7,
            ));

            let bs = bg_state_series(lambda, 200, p, &e, &g)?.wave;
            let zs = perelomov_state_series(z, 400, p, &e, &g)?.wave;
            let d = bg.sub(&bs)?.max_abs().max(pz.sub(&zs)?.max_abs());
            out.push(Check::le(
                format!("states.closed_vs_series[{},t={t}]", tag(conv)),
                0,
                d,
                1e-8,
            ));
        }
    }

    let profile = FrequencyProfile::Zero;
    for t in TIMES {
        let mut worst: f64 = 0.0;
        for n in 0..=5 {
            let r = schrodinger_residual(
                |e| Ok(basis_state(&BasisIndex::bound(n, p), p, e, &g)?),
                p,
                &profile,
                WR,
                t,
                None,
            )?;
            worst = worst.max(r);
        }
        out.push(Check::le(
            format!("states.schrodinger.basis[n<=5,t={t}]"),
            3,
            worst,
            1e-5,
        ));
        let r = schrodinger_residual(
            |e| bg_state_closed(c(FIGURE_LAMBDA), p, e, &g),
            p,
            &profile,
            WR,
            t,
            None,
        )?;
        out.push(Check::le(
            format!("states.schrodinger.bg[t={t}]"),
            3,
            r,
            1e-5,
        ));
        let r = schrodinger_residual(
            |e| perelomov_state(default_z(p.k), p, e, &g),
            p,
            &profile,
            WR,
            t,
            None,
        )?;
        out.push(Check::le(
            format!("states.schrodinger.perelomov[t={t}]"),
            3,
            r,
            1e-5,
        ));
    }
    Ok(())
}

pub fn algebra_suite(p: &PhysParams, out: &mut Vec<Check>) -> Result<(), CliError> {
    let k = p.k;
    out.push(Check::le(
        "algebra.k_from_g",
        1,
        (k - (0.5 + 0.25 * (1.0 + 4.0 * p.g).sqrt())).abs(),
        0.0,
    ));
    out.push(Check::info("algebra.default_z", 1, default_z(k).re));
    // Root of ⟨k₀⟩ = k+1; reported, graded only by the acceptance target.
    out.push(Check::info("algebra.lambda_star", 1, lambda_star(k)?));
    out.push(Check::le("algebra.casimir", 4, casimir_check(p), 1e-12));

    let g = Arc::new(RadialGrid::standard(40.0, 0.02)?);
    for t in TIMES {
        let e = env(t, WR)?;
        let psis = (0..=6)
            .map(|n| basis_state(&BasisIndex::bound(n, p), p, &e, &g))
            .collect::<Result<Vec<_>, _>>()?;
        let (mut up, mut down, mut diag): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for n in 0..=5 {
            let kp = k_plus(p, &e, &psis[n])?;
            let want = psis[n + 1].scale(c(-c_plus(n, k)));
            up = up.max(rel(&kp, &want, &want, 1e-6)?);
            if n > 0 {
                let km = k_minus(p, &e, &psis[n])?;
                let want = psis[n - 1].scale(c(-c_minus(n, k)));
                down = down.max(rel(&km, &want, &want, 1e-6)?);
            } else {
                // k₋ψ₀ = 0: absolute norm on the support window
                let km = k_minus(p, &e, &psis[0])?;
                let r = psis[0].support(1e-6);
                let w = g.weights();
                let s: f64 = (r.start.max(km.trusted().start)..r.end.min(km.trusted().end))
                    .map(|j| km.values[j].norm_sqr() * w[j])
                    .sum();
                down = down.max(s.sqrt());
            }
            let k0 = k_zero(p, &e, &psis[n])?;
            let want = psis[n].scale(c(n as f64 + k));
            diag = diag.max(rel(&k0, &want, &want, 1e-6)?);
        }
        out.push(Check::le(
            format!("algebra.ladder.raise[n<=5,t={t}]"),
            4,
            up,
            1e-5,
        ));
        out.push(Check::le(
            format!("algebra.ladder.lower[n<=5,t={t}]"),
            4,
            down,
            1e-5,
        ));
        out.push(Check::le(
            format!("algebra.k0_eigen[n<=5,t={t}]"),
            4,
            diag,
            1e-5,
        ));
    }

    // Holomorphic commutators on an N = 40 truncation; the top entries are
    // inexact by construction, so only rows untouched by truncation count.
    const N: usize = 40;
    let (mut c0p, mut c0m, mut cmp): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in 0..N - 2 {
        let v = CoeffVector::basis(n, N)?;
        let app = |op, v: &CoeffVector| holo_generator(op, v, k);
        let kp = app(HoloOp::KPlus, &v)?;
        let km = app(HoloOp::KMinus, &v)?;
        let k0 = app(HoloOp::KZero, &v)?;
        let a = app(HoloOp::KZero, &kp)?.combine(c(1.0), &app(HoloOp::KPlus, &k0)?, c(-1.0));
        let b = app(HoloOp::KZero, &km)?.combine(c(1.0), &app(HoloOp::KMinus, &k0)?, c(-1.0));
        let d = app(HoloOp::KMinus, &kp)?.combine(c(1.0), &app(HoloOp::KPlus, &km)?, c(-1.0));
        for j in 0..N - 1 {
            let scale = |x: Complex64| x.norm().max(1.0);
            c0p = c0p.max((a.coeffs[j] - kp.coeffs[j]).norm() / scale(kp.coeffs[j]));
            c0m = c0m.max((b.coeffs[j] + km.coeffs[j]).norm() / scale(km.coeffs[j]));
            cmp = cmp.max((d.coeffs[j] - k0.coeffs[j] * 2.0).norm() / scale(k0.coeffs[j] * 2.0));
        }
    }
    out.push(Check::le("algebra.holo.[k0,k+]=k+", 4, c0p, 1e-10));
    out.push(Check::le("algebra.holo.[k0,k-]=-k-", 4, c0m, 1e-10));
    out.push(Check::le("algebra.holo.[k-,k+]=2k0", 4, cmp, 1e-10));

    let lambda = c(FIGURE_LAMBDA);
    let v = CoeffVector::bg(lambda, N, k)?;
    let r = holo_generator(HoloOp::KMinus, &v, k)?;
    let worst = (0..N - 1)
        .map(|n| {
            (r.coeffs[n] - v.coeffs[n] * lambda).norm() / v.coeffs[n].norm().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    out.push(Check::le("algebra.holo.bg_eigen", 4, worst, 1e-10));

    let v = CoeffVector::bg(lambda, 120, k)?;
    let m1: f64 = v
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| (n as f64 + k) * a.norm_sqr())
        .sum();
    let m2: f64 = v
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| (n as f64 + k).powi(2) * a.norm_sqr())
        .sum();
    let d = (mean_k0(lambda, k)? - m1)
        .abs()
        .max((mean_k0_sq(lambda, k)? - m2).abs());
    out.push(Check::le("algebra.bg_mean_values", 0, d, 1e-10));
    Ok(())
}

pub fn darboux_suite(p: &PhysParams, out: &mut Vec<Check>) -> Result<(), CliError> {
    let g = Arc::new(RadialGrid::composition(30.0)?);
    let k = p.k;
    for m in [0, 1, 2] {
        let cfg = DarbouxConfig::new(m);
        for t in [0.0, 1.0] {
            let e = env(t, WR)?;
            let psis = (0..=4)
                .map(|n| basis_state(&BasisIndex::bound(n, p), p, &e, &g))
                .collect::<Result<Vec<_>, _>>()?;
            let mut worst: f64 = 0.0;
            for (j, b) in psis.iter().enumerate() {
                let llb = apply_l_dagger(&apply_l(b, &cfg, p, &e)?, &cfg, p, &e)?;
                for (i, a) in psis.iter().enumerate() {
                    let want = if i == j {
                        j as f64 + 2.0 * k + m as f64
                    } else {
                        0.0
                    };
                    worst = worst.max((a.inner(&llb)? - c(want)).norm());
                }
            }
            out.push(Check::le(
                format!("darboux.factorization[m={m},t={t}]"),
                5,
                worst,
                1e-5,
            ));

            let (mut p0p, mut pmp): (f64, f64) = (0.0, 0.0);
            for n in 0..=4 {
                let f = transformed_state(TransformedKind::PhiN(n), &cfg, p, &e, &g)?.wave;
                let pp = p_plus(&f, &cfg, p, &e)?;
                let pm = p_minus(&f, &cfg, p, &e)?;
                let a = p_zero(&pp, &cfg, p, &e)?;
                let b = p_plus(&p_zero(&f, &cfg, p, &e)?, &cfg, p, &e)?;
                p0p = p0p.max(rel(&a.sub(&b)?, &pp, &pp, 1e-6)?);
                let lhs = p_minus(&pp, &cfg, p, &e)?.sub(&p_plus(&pm, &cfg, p, &e)?)?;
                let rhs = f.scale(c(polynomial_commutator_value(n, k, m)));
                pmp = pmp.max(rel(&lhs, &rhs, &f, 1e-6)?);
            }
            out.push(Check::le(
                format!("darboux.poly.[p0,p+][m={m},t={t}]"),
                5,
                p0p,
                1e-4,
            ));
            out.push(Check::le(
                format!("darboux.poly.[p-,p+][m={m},t={t}]"),
                5,
                pmp,
                1e-4,
            ));
        }
    }

    let gs = Arc::new(RadialGrid::standard(30.0, 0.03)?);
    for m in 0..=3 {
        let cfg = DarbouxConfig::new(m);
        let mut worst: f64 = 0.0;
        for t in TIMES {
            let e = env(t, WR)?;
            let a = potential_difference(&cfg, p, &e, &gs)?;
            let b = potential_difference_numeric(&cfg, p, &e, &gs)?;
            let edge = gs.edge_width();
            for j in edge..a.len() - edge {
                worst = worst.max((a[j] - b[j]).abs() / a[j].abs().max(1.0));
            }
        }
        out.push(Check::le(
            format!("darboux.potential_dual[m={m}]"),
            5,
            worst,
            1e-4,
        ));
    }

    let cfg = DarbouxConfig::new(1);
    let lambda = c(FIGURE_LAMBDA);
    let z = default_z(k);
    for t in [0.0, 1.0] {
        let e = env(t, WR)?;
        for (name, kind) in [
            ("phi_lambda", TransformedKind::PhiLambda(lambda)),
            (
                "phi_lambda_complex",
                TransformedKind::PhiLambda(Complex64::new(0.6, 0.9)),
            ),
            ("phi_z", TransformedKind::PhiZ(z)),
            (
                "phi_z_complex",
                TransformedKind::PhiZ(Complex64::new(-0.3, 0.4)),
            ),
        ] {
            let a = transformed_state(kind, &cfg, p, &e, &g)?.wave;
            let b = transformed_state_series(kind, 400, &cfg, p, &e, &g)?.wave;
            let phase = match kind {
                TransformedKind::PhiLambda(l) => Complex64::from_polar(1.0, (k - 0.5) * l.arg()),
                _ => c(1.0),
            };
            let b = b.scale(phase);
            let d = a.wave_distance(&b);
            out.push(Check::le(
                format!("darboux.closed_vs_series.{name}[t={t}]"),
                5,
                d,
                1e-6,
            ));
            out.push(Check::le(
                format!("darboux.norm.{name}[t={t}]"),
                0,
                (a.norm() - 1.0).abs(),
                1e-6,
            ));
        }
    }

    for t in TIMES {
        let e = env(t, WR)?;
        let a = potential_difference(&cfg, p, &e, &g)?;
        let mut worst: f64 = 0.0;
        for n in 0..=5 {
            let r = schrodinger_residual(
                |e| Ok(transformed_state(TransformedKind::PhiN(n), &cfg, p, e, &g)?.wave),
                p,
                &FrequencyProfile::Zero,
                WR,
                t,
                Some(&a),
            )?;
            worst = worst.max(r);
        }
        out.push(Check::le(
            format!("darboux.schrodinger.basis[n<=5,t={t}]"),
            3,
            worst,
            1e-4,
        ));
        for (name, kind) in [
            ("phi_lambda", TransformedKind::PhiLambda(lambda)),
            ("phi_z", TransformedKind::PhiZ(z)),
        ] {
            let r = schrodinger_residual(
                |e| Ok(transformed_state(kind, &cfg, p, e, &g)?.wave),
                p,
                &FrequencyProfile::Zero,
                WR,
                t,
                Some(&a),
            )?;
            out.push(Check::le(
                format!("darboux.schrodinger.{name}[t={t}]"),
                3,
                r,
                1e-4,
            ));
        }
    }

    // p₀ and p₋ on the ground state of the transformed basis
    let e = env(0.0, WR)?;
    let f0 = transformed_state(TransformedKind::PhiN(0), &cfg, p, &e, &g)?.wave;
    let down = p_operator(POperator::PMinus, &f0, &cfg, p, &e)?;
    out.push(Check::le("darboux.p_minus_ground", 0, down.norm(), 1e-4));

    let gu = Arc::new(RadialGrid::uniform(16.0, 1600)?);
    let e = env(0.8, WR)?;
    let u = DarbouxConfig::new(2).transformation_function(p, &e, &gu)?;
    out.push(Check::le(
        "darboux.reality_condition[m=2]",
        0,
        reality_condition_check(&u)?,
        1e-4,
    ));

    let mut worst: f64 = 0.0;
    for m in 0..4 {
        let cfg = DarbouxConfig::new(m);
        let em = CoeffVector::basis(m, 10)?;
        worst = worst.max(holo_darboux(&em, Direction::Forward, &cfg, k).norm_sq());
        for n in 0..6 {
            let v = holo_transformed_basis(n, 8, &cfg, k)?;
            let want = ((n as f64 + 2.0 * k + m as f64) / (2.0 * k + m as f64)).sqrt();
            worst = worst.max((v.coeffs[n].re - want).abs());
        }
    }
    out.push(Check::le("darboux.holomorphic", 0, worst, 1e-12));
    Ok(())
}

pub fn measures_suite(p: &PhysParams, out: &mut Vec<Check>) -> Result<(), CliError> {
    let k = p.k;
    let s = QuadratureScheme::default();
    let gamma = |x: f64| gamma_ln(x).map(f64::exp);
    let mut wf: f64 = 0.0;
    for n in 0..=6 {
        let got = f_moment(n, k, &s)?.value.re;
        let want = gamma(n as f64 + 1.0)? * gamma(n as f64 + 2.0 * k)?;
        wf = wf.max(((got - want) / want).abs());
    }
    out.push(Check::le("measures.f_moments[n<=6]", 6, wf, 1e-5));

    let table = PhiTable::new(k, 1, &s)?;
    for m in [0, 1, 2] {
        let t = if m == 1 {
            table.clone()
        } else {
            PhiTable::new(k, m, &s)?
        };
        let mut w: f64 = 0.0;
        for n in 0..=6 {
            let got = t.moment(n, &s)?.value.re;
            let want = gamma(n as f64 + 1.0)? * gamma(n as f64 + 2.0 * k)?
                / (n as f64 + 2.0 * k + m as f64);
            w = w.max(((got - want) / want).abs());
        }
        out.push(Check::le(
            format!("measures.phi_moments[m={m},n<=6]"),
            6,
            w,
            1e-5,
        ));
    }

    for (name, mu) in [
        ("original_bg", RadialMeasure::original_bg(k)?),
        ("transformed_bg", RadialMeasure::transformed_bg(table)),
        ("perelomov", RadialMeasure::perelomov(k)?),
    ] {
        let mut w: f64 = 0.0;
        for n in 0..=6 {
            w = w.max((identity_resolution_check(&mu, n, n, &s)? - c(1.0)).norm());
        }
        out.push(Check::le(
            format!("measures.resolution.{name}[n<=6]"),
            6,
            w,
            1e-5,
        ));
    }

    let mut w: f64 = 0.0;
    for l in [Complex64::new(0.7, 0.0), Complex64::new(-0.4, 0.9)] {
        for q in 0..4u32 {
            w = w.max((kernel_point_evaluation(l, q, k, &s)? - l.powu(q)).norm());
        }
    }
    out.push(Check::le("measures.kernel_point_evaluation", 6, w, 1e-5));
    Ok(())
}

trait WaveDistance {
    fn wave_distance(&self, other: &GridWave) -> f64;
}

impl WaveDistance for GridWave {
    /// Largest pointwise difference over the trusted range.
    fn wave_distance(&self, other: &GridWave) -> f64 {
        self.trusted()
            .map(|j| (self.values[j] - other.values[j]).norm())
            .fold(0.0, f64::max)
    }
}
