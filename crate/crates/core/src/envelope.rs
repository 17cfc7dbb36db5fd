//! The classical envelope ε(t), a complex solution of `ε̈ + 4ω²(t)ε = 0`.
//!
//! The quantum states depend on time only through ε, its derivative and the
//! real combinations `γ = εε̄`, `γ̇`. The Wronskian `W = ε̇ε̄ − εε̄̇` is purely
//! imaginary and conserved; its value is fixed by a [`Convention`].

use crate::prelude::*;
use crate::{Error, Result};
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

/// Normalization of the envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `W = i/2`; free particle `ε = (t − i)/2`. The states built from this
    /// envelope solve `i∂ₜψ = h₀ψ`.
    WronskianHalfI,
    /// `ε = (t + i)/√2` for the free particle (`W = −i`). States built from it
    /// are the √2-dilated copies of the `WronskianHalfI` states.
    #[default]
    PaperFreeParticle,
}

impl Convention {
    /// The conserved Wronskian `ε̇ε̄ − εε̄̇`.
    pub fn wronskian(self) -> Complex64 {
        match self {
            Convention::WronskianHalfI => Complex64::new(0.0, 0.5),
            Convention::PaperFreeParticle => Complex64::new(0.0, -1.0),
        }
    }

    /// Free-particle `(ε(0), ε̇(0))`.
    fn initial(self) -> (Complex64, Complex64) {
        match self {
            Convention::WronskianHalfI => (Complex64::new(0.0, -0.5), c(0.5)),
            Convention::PaperFreeParticle => (Complex64::new(0.0, FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)),
        }
    }
}

/// Piecewise-linear ω(t) through tabulated samples.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    t: Vec<f64>,
    omega: Vec<f64>,
}

impl FrequencyTable {
    pub fn new(t: Vec<f64>, omega: Vec<f64>) -> Result<Self> {
        if t.len() != omega.len() || t.len() < 2 {
            return Err(Error::Grid(
                "frequency table needs at least two (t, ω) rows",
            ));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid(
                "frequency table times must be strictly increasing",
            ));
        }
        if t.iter().chain(&omega).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("frequency table"));
        }
        Ok(FrequencyTable { t, omega })
    }

    pub fn start(&self) -> f64 {
        self.t[0]
    }

    pub fn end(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    fn contains(&self, t: f64) -> bool {
        t >= self.start() && t <= self.end()
    }

    pub fn omega(&self, t: f64) -> Result<f64> {
        if !self.contains(t) {
            return Err(Error::OutOfTable {
                t,
                start: self.start(),
                end: self.end(),
            });
        }
        let i = self
            .t
            .partition_point(|&s| s <= t)
            .clamp(1, self.t.len() - 1);
        let (t0, t1) = (self.t[i - 1], self.t[i]);
        let s = (t - t0) / (t1 - t0);
        Ok(self.omega[i - 1] * (1.0 - s) + self.omega[i] * s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyProfile {
    Zero,
    Constant(f64),
    Tabulated(FrequencyTable),
}

impl FrequencyProfile {
    pub fn omega(&self, t: f64) -> Result<f64> {
        match self {
            FrequencyProfile::Zero => Ok(0.0),
            FrequencyProfile::Constant(w) => Ok(*w),
            FrequencyProfile::Tabulated(tab) => tab.omega(t),
        }
    }
}

/// ε and derived quantities at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub t: f64,
    pub eps: Complex64,
    pub eps_dot: Complex64,
    /// `|ε|²`
    pub gamma: f64,
    /// `d|ε|²/dt`
    pub gamma_dot: f64,
    /// `arg ε`, continuous in t from its value at t = 0.
    pub theta: f64,
    /// `ω(t)`
    pub omega: f64,
}

impl Envelope {
    fn from_parts(t: f64, eps: Complex64, eps_dot: Complex64, theta: f64, omega: f64) -> Self {
        Envelope {
            t,
            eps,
            eps_dot,
            gamma: eps.norm_sqr(),
            gamma_dot: 2.0 * (eps_dot * eps.conj()).re,
            theta,
            omega,
        }
    }

    /// `ε̇ε̄ − εε̄̇`.
    pub fn wronskian(&self) -> Complex64 {
        self.eps_dot * self.eps.conj() - self.eps * self.eps_dot.conj()
    }

    /// `ε̈ = −4ω²ε`.
    pub fn eps_ddot(&self) -> Complex64 {
        self.eps * (-4.0 * self.omega * self.omega)
    }

    /// `(ε̄/ε)^p` on the branch continuous in t, i.e. `e^{−2ipθ}`.
    pub fn phase_power(&self, p: f64) -> Complex64 {
        Complex64::from_polar(1.0, -2.0 * p * self.theta)
    }

    /// `ε^{p}` on the continuous branch.
    pub fn eps_power(&self, p: f64) -> Complex64 {
        Complex64::from_polar(self.gamma.powf(0.5 * p), p * self.theta)
    }
}

/// Envelope at time `t` for the given profile and convention.
pub fn envelope_at(profile: &FrequencyProfile, t: f64, convention: Convention) -> Result<Envelope> {
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    match profile {
        FrequencyProfile::Zero => {
            let (eps, theta) = match convention {
                Convention::WronskianHalfI => (Complex64::new(0.5 * t, -0.5), (-1.0f64).atan2(t)),
                Convention::PaperFreeParticle => {
                    (Complex64::new(t, 1.0) * FRAC_1_SQRT_2, 1.0f64.atan2(t))
                }
            };
            Ok(Envelope::from_parts(
                t,
                eps,
                convention.initial().1,
                theta,
                0.0,
            ))
        }
        FrequencyProfile::Constant(w0) => {
            let w0 = *w0;
            if !(w0 > 0.0) || !w0.is_finite() {
                return Err(Error::Domain {
                    what: "constant frequency",
                    value: w0,
                });
            }
            // wronskian: ε = −i e^{2iω₀t}/√(8ω₀);  paper: ε = i e^{−2iω₀t}/(2√ω₀)
            let (amp, rate, theta0) = match convention {
                Convention::WronskianHalfI => (1.0 / (8.0 * w0).sqrt(), 2.0 * w0, -FRAC_PI_2),
                Convention::PaperFreeParticle => (0.5 / w0.sqrt(), -2.0 * w0, FRAC_PI_2),
            };
            let theta = theta0 + rate * t;
            let eps = Complex64::from_polar(amp, theta);
            Ok(Envelope::from_parts(t, eps, I * rate * eps, theta, w0))
        }
        FrequencyProfile::Tabulated(tab) => integrate(tab, t, convention),
    }
}

// State: [Re ε, Im ε, Re ε̇, Im ε̇, θ].
type State = [f64; 5];

fn rhs(tab: &FrequencyTable, t: f64, y: &State) -> Result<State> {
    let w = tab.omega(t)?;
    let k = -4.0 * w * w;
    let g = y[0] * y[0] + y[1] * y[1];
    // Im(ε̇ ε̄)/γ
    let dtheta = (y[3] * y[0] - y[2] * y[1]) / g;
    Ok([y[2], y[3], k * y[0], k * y[1], dtheta])
}

fn wronskian_of(y: &State) -> Complex64 {
    let eps = Complex64::new(y[0], y[1]);
    let dot = Complex64::new(y[2], y[3]);
    dot * eps.conj() - eps * dot.conj()
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const RTOL: f64 = 1e-12;
const WRONSKIAN_DRIFT: f64 = 1e-11;

fn integrate(tab: &FrequencyTable, t_end: f64, convention: Convention) -> Result<Envelope> {
    for t in [0.0, t_end] {
        if !tab.contains(t) {
            return Err(Error::OutOfTable {
                t,
                start: tab.start(),
                end: tab.end(),
            });
        }
    }
    let (e0, d0) = convention.initial();
    let w0 = convention.wronskian();
    let mut y: State = [e0.re, e0.im, d0.re, d0.im, e0.im.atan2(e0.re)];
    let mut t = 0.0;
    let dir = if t_end >= 0.0 { 1.0 } else { -1.0 };
    let mut h = dir * 1e-3;
    let mut steps = 0usize;
    while (t_end - t) * dir > 0.0 {
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        let mut k = [[0.0; 5]; 7];
        k[0] = rhs(tab, t, &y)?;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                for (v, d) in ys.iter_mut().zip(kj) {
                    *v += h * A[s - 1][j] * d;
                }
            }
            k[s] = rhs(tab, t + C[s - 1] * h, &ys)?;
        }
        let mut y5 = y;
        let mut err: f64 = 0.0;
        for i in 0..5 {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] += h * d5;
            let scale = RTOL * (1.0 + y[i].abs().max(y5[i].abs()));
            err = err.max((h * (d5 - d4)).abs() / scale);
        }
        let drift = (wronskian_of(&y5) - w0).norm() / w0.norm();
        if err <= 1.0 && drift <= WRONSKIAN_DRIFT {
            t += h;
            y = y5;
        }
        let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        h *= factor.clamp(0.2, 5.0);
        steps += 1;
        if steps > 2_000_000 || h.abs() < 1e-14 {
            return Err(Error::NonConvergence {
                what: "envelope integration",
                partial: t,
                error_estimate: err,
            });
        }
    }
    let eps = Complex64::new(y[0], y[1]);
    let dot = Complex64::new(y[2], y[3]);
    Ok(Envelope::from_parts(
        t_end,
        eps,
        dot,
        y[4],
        tab.omega(t_end)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_particle_conventions() {
        let e = envelope_at(&FrequencyProfile::Zero, 0.0, Convention::PaperFreeParticle).unwrap();
        assert!((e.eps - Complex64::new(0.0, FRAC_1_SQRT_2)).norm() < 1e-16);
        assert!((e.gamma - 0.5).abs() < 1e-15);
        assert!((e.wronskian() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let e = envelope_at(&FrequencyProfile::Zero, 0.0, Convention::WronskianHalfI).unwrap();
        assert_eq!(e.eps, Complex64::new(0.0, -0.5));
        assert!((e.wronskian() - Complex64::new(0.0, 0.5)).norm() < 1e-16);
        assert!((e.theta + FRAC_PI_2).abs() < 1e-16);
    }

    #[test]
    fn constant_frequency() {
        for conv in [Convention::WronskianHalfI, Convention::PaperFreeParticle] {
            let p = FrequencyProfile::Constant(0.7);
            let e0 = envelope_at(&p, 0.0, conv).unwrap();
            for t in [0.3, 1.0, 7.5] {
                let e = envelope_at(&p, t, conv).unwrap();
                assert!((e.gamma - e0.gamma).abs() < 1e-15);
                assert!(e.gamma_dot.abs() < 1e-15);
                assert!((e.wronskian() - conv.wronskian()).norm() < 1e-14);
                // continuous phase agrees with the principal argument mod 2π
                let d = (e.theta - e.eps.arg()).rem_euclid(2.0 * core::f64::consts::PI);
                assert!(d < 1e-12 || (d - 2.0 * core::f64::consts::PI).abs() < 1e-12);
            }
        }
        assert!(envelope_at(
            &FrequencyProfile::Constant(0.0),
            1.0,
            Convention::WronskianHalfI
        )
        .is_err());
    }

    #[test]
    fn tabulated_matches_closed_forms() {
        let ts: Vec<f64> = (0..=40).map(|i| -1.0 + 0.1 * i as f64).collect();
        for (omega, profile) in [
            (0.0, FrequencyProfile::Zero),
            (0.8, FrequencyProfile::Constant(0.8)),
        ] {
            let tab = FrequencyTable::new(ts.clone(), vec![omega; ts.len()]).unwrap();
            let tab = FrequencyProfile::Tabulated(tab);
            for conv in [Convention::WronskianHalfI, Convention::PaperFreeParticle] {
                // constant-ω closed forms start from a different ε(0)
                if omega > 0.0 {
                    let e = envelope_at(&tab, 2.5, conv).unwrap();
                    assert!((e.wronskian() - conv.wronskian()).norm() < 1e-9);
                    let resid = (e.eps_ddot() + e.eps * 4.0 * omega * omega).norm();
                    assert!(resid < 1e-12);
                    continue;
                }
                for t in [-0.7, 0.4, 2.0] {
                    let a = envelope_at(&tab, t, conv).unwrap();
                    let b = envelope_at(&profile, t, conv).unwrap();
                    assert!((a.eps - b.eps).norm() < 1e-10, "{t}");
                    assert!((a.theta - b.theta).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn tabulated_wronskian_conserved() {
        let ts: Vec<f64> = (0..=200).map(|i| 0.05 * i as f64).collect();
        let ws: Vec<f64> = ts.iter().map(|t| 1.0 + 0.5 * (1.3 * t).sin()).collect();
        let p = FrequencyProfile::Tabulated(FrequencyTable::new(ts, ws).unwrap());
        for conv in [Convention::WronskianHalfI, Convention::PaperFreeParticle] {
            for t in [1.0, 5.0, 10.0] {
                let e = envelope_at(&p, t, conv).unwrap();
                assert!((e.wronskian() - conv.wronskian()).norm() < 1e-9);
                assert!(e.gamma > 0.0);
            }
        }
        assert!(matches!(
            envelope_at(&p, 10.5, Convention::WronskianHalfI),
            Err(Error::OutOfTable { .. })
        ));
    }

    #[test]
    fn second_derivative_residual() {
        // centred differences of the closed forms against −4ω²ε
        let h = 1e-3;
        for (p, w) in [
            (FrequencyProfile::Zero, 0.0),
            (FrequencyProfile::Constant(1.1), 1.1),
        ] {
            for conv in [Convention::WronskianHalfI, Convention::PaperFreeParticle] {
                let at = |t| envelope_at(&p, t, conv).unwrap().eps;
                let t = 0.9;
                let dd = (at(t + h) - at(t) * 2.0 + at(t - h)) / (h * h);
                let e = at(t);
                assert!((dd + e * 4.0 * w * w).norm() <= 1e-5 * e.norm());
                let dot = (at(t + h) - at(t - h)) / (2.0 * h);
                assert!((dot - envelope_at(&p, t, conv).unwrap().eps_dot).norm() < 1e-5);
            }
        }
    }
}
