//! Figure data: probability densities of the coherent states and their
//! Darboux partners, their widths, and the displacement metric between them.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use singosc_core::darboux::{transformed_state, DarbouxConfig, TransformedKind};
use singosc_core::envelope::{envelope_at, FrequencyProfile};
use singosc_core::numerics::{GridWave, RadialGrid};
use singosc_core::states::{
    basis_state, bg_state_closed, density_moments, perelomov_state, BasisIndex, DensityMoments,
};

use crate::config::{convention_name, RunConfig};
use crate::csv::{self, num, Table};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Barut–Girardello, labelled by λ.
    Bg,
    /// Perelomov, labelled by z.
    Perelomov,
    /// The ground state ψ₀ (reference curve).
    Ground,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Bg => "bg",
            Family::Perelomov => "perelomov",
            Family::Ground => "ground",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub family: Family,
    pub transformed: bool,
    pub t: f64,
    pub label: Complex64,
    pub wave: GridWave,
}

impl Curve {
    pub fn file_name(&self) -> String {
        let kind = if self.transformed {
            "transformed"
        } else {
            "original"
        };
        match self.family {
            Family::Ground => format!("ground_t{}.csv", self.t),
            f => format!("{}_{kind}_t{}.csv", f.name(), self.t),
        }
    }

    pub fn density(&self) -> Vec<f64> {
        self.wave.density()
    }

    pub fn moments(&self) -> Result<DensityMoments, CliError> {
        Ok(density_moments(&self.wave)?)
    }
}

/// Figure grid: `grid_n` equally spaced points up to `grid_max`.
pub fn figure_grid(cfg: &RunConfig) -> Result<Arc<RadialGrid>, CliError> {
    Ok(Arc::new(RadialGrid::uniform(cfg.grid_max, cfg.grid_n)?))
}

/// All curves of a run: ψ₀, ψ_λ, ψ_z and their m-partners φ_λ, φ_z at each time.
pub fn curves(cfg: &RunConfig) -> Result<Vec<Curve>, CliError> {
    cfg.validate()?;
    let p = cfg.params()?;
    let z = cfg.z()?;
    let grid = figure_grid(cfg)?;
    let dcfg = DarbouxConfig::new(cfg.m);
    dcfg.validate(&p)?;
    let mut out = Vec::new();
    for &t in &cfg.times {
        let e = envelope_at(&FrequencyProfile::Zero, t, cfg.convention)?;
        let curve = |family, transformed, label, wave| Curve {
            family,
            transformed,
            t,
            label,
            wave,
        };
        out.push(curve(
            Family::Ground,
            false,
            Complex64::new(0.0, 0.0),
            basis_state(&BasisIndex::bound(0, &p), &p, &e, &grid)?,
        ));
        out.push(curve(
            Family::Bg,
            false,
            cfg.lambda,
            bg_state_closed(cfg.lambda, &p, &e, &grid)?,
        ));
        out.push(curve(
            Family::Perelomov,
            false,
            z,
            perelomov_state(z, &p, &e, &grid)?,
        ));
        let tl = transformed_state(TransformedKind::PhiLambda(cfg.lambda), &dcfg, &p, &e, &grid)?;
        out.push(curve(Family::Bg, true, cfg.lambda, tl.wave));
        let tz = transformed_state(TransformedKind::PhiZ(z), &dcfg, &p, &e, &grid)?;
        out.push(curve(Family::Perelomov, true, z, tz.wave));
    }
    Ok(out)
}

fn label_text(l: Complex64) -> String {
    format!("{},{}", l.re, l.im)
}

fn metadata(cfg: &RunConfig, c: &Curve) -> Result<Vec<(String, String)>, CliError> {
    let p = cfg.params()?;
    let label_key = match c.family {
        Family::Bg => "lambda",
        Family::Perelomov => "z",
        Family::Ground => "n",
    };
    let label = match c.family {
        Family::Ground => "0".to_string(),
        _ => label_text(c.label),
    };
    Ok(vec![
        ("g".into(), cfg.g.to_string()),
        ("k".into(), p.k.to_string()),
        ("m".into(), cfg.m.to_string()),
        ("convention".into(), convention_name(cfg.convention).into()),
        ("family".into(), c.family.name().into()),
        ("transformed".into(), c.transformed.to_string()),
        (label_key.into(), label),
        ("t".into(), c.t.to_string()),
    ])
}

/// Writes one CSV per curve into the output directory; returns the paths.
pub fn cmd_density(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut paths = Vec::new();
    for c in curves(cfg)? {
        let path = dir.join(c.file_name());
        csv::write_xy(
            &path,
            metadata(cfg, &c)?,
            ["x", "density"],
            c.wave.grid.points(),
            &c.density(),
        )?;
        paths.push(path);
    }
    Ok(paths)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WidthRow {
    pub family: Family,
    pub transformed: bool,
    pub t: f64,
    pub moments: DensityMoments,
}

/// Residual between an original density and its transformed partner before
/// and after the best horizontal displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftRow {
    pub family: Family,
    pub t: f64,
    pub pre: f64,
    pub post: f64,
    pub shift: f64,
}

impl ShiftRow {
    pub fn ratio(&self) -> f64 {
        self.post / self.pre
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Localization {
    pub widths: Vec<WidthRow>,
    pub shifts: Vec<ShiftRow>,
}

impl Localization {
    pub fn width(&self, family: Family, transformed: bool, t: f64) -> Option<&WidthRow> {
        self.widths
            .iter()
            .find(|r| r.family == family && r.transformed == transformed && r.t == t)
    }

    pub fn shift(&self, family: Family, t: f64) -> Option<&ShiftRow> {
        self.shifts.iter().find(|r| r.family == family && r.t == t)
    }
}

pub fn localization(cfg: &RunConfig) -> Result<Localization, CliError> {
    let all = curves(cfg)?;
    let mut widths = Vec::new();
    let mut shifts = Vec::new();
    for c in all.iter().filter(|c| c.family != Family::Ground) {
        widths.push(WidthRow {
            family: c.family,
            transformed: c.transformed,
            t: c.t,
            moments: c.moments()?,
        });
    }
    for &t in &cfg.times {
        for family in [Family::Bg, Family::Perelomov] {
            let find = |tr: bool| {
                all.iter()
                    .find(|c| c.family == family && c.transformed == tr && c.t == t)
                    .expect("every family is computed at every time")
            };
            let (a, b) = (find(false), find(true));
            let m = displacement_metric(
                a.wave.grid.points(),
                &a.density(),
                &b.density(),
                cfg.grid_max / 4.0,
            );
            shifts.push(ShiftRow {
                family,
                t,
                pre: m.pre,
                post: m.post,
                shift: m.shift,
            });
        }
    }
    Ok(Localization { widths, shifts })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacement {
    pub pre: f64,
    pub post: f64,
    pub shift: f64,
}

/// `min_s ‖ρ_b(x) − ρ_a(x − s)‖₂` over `|s| ≤ max_shift`, alongside the
/// unshifted `‖ρ_b − ρ_a‖₂`. Both densities are resampled on a uniform grid
/// with linear interpolation and taken as zero outside their samples.
pub fn displacement_metric(x: &[f64], a: &[f64], b: &[f64], max_shift: f64) -> Displacement {
    let n = x.len();
    let x_end = x[n - 1];
    let h = x_end / n as f64;
    let u: Vec<f64> = (1..=n).map(|i| h * i as f64).collect();
    let interp = |xs: &[f64], ys: &[f64], v: f64| -> f64 {
        if v <= 0.0 || v > xs[xs.len() - 1] {
            return 0.0;
        }
        let j = xs.partition_point(|&p| p < v);
        if j == 0 {
            // segment [0, x₀], density vanishing at the origin
            return ys[0] * v / xs[0];
        }
        let s = (v - xs[j - 1]) / (xs[j] - xs[j - 1]);
        ys[j - 1] * (1.0 - s) + ys[j] * s
    };
    let bu: Vec<f64> = u.iter().map(|&v| interp(x, b, v)).collect();
    let cost = |s: f64| -> f64 {
        let ss: f64 = u
            .iter()
            .zip(&bu)
            .map(|(&v, &bv)| (bv - interp(x, a, v - s)).powi(2))
            .sum();
        (ss * h).sqrt()
    };
    let pre = cost(0.0);
    let steps = (max_shift / h).ceil() as i64;
    let mut best = (0.0, pre);
    // coarse scan at 8 grid spacings, then golden section around the minimum
    let stride = 8;
    let mut i = -steps;
    while i <= steps {
        let s = i as f64 * h;
        let v = cost(s);
        if v < best.1 {
            best = (s, v);
        }
        i += stride;
    }
    let (mut lo, mut hi) = (best.0 - stride as f64 * h, best.0 + stride as f64 * h);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c1, mut c2) = (hi - r * (hi - lo), lo + r * (hi - lo));
    let (mut f1, mut f2) = (cost(c1), cost(c2));
    for _ in 0..60 {
        if f1 < f2 {
            hi = c2;
            c2 = c1;
            f2 = f1;
            c1 = hi - r * (hi - lo);
            f1 = cost(c1);
        } else {
            lo = c1;
            c1 = c2;
            f1 = f2;
            c2 = lo + r * (hi - lo);
            f2 = cost(c2);
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    let (s, v) = if f1 < f2 { (c1, f1) } else { (c2, f2) };
    let (shift, post) = if v < best.1 { (s, v) } else { best };
    Displacement { pre, post, shift }
}

/// Writes `localization.csv` (widths) and `displacement.csv` (shift metric).
pub fn cmd_localization(cfg: &RunConfig) -> Result<(Localization, Vec<PathBuf>), CliError> {
    let loc = localization(cfg)?;
    let dir: &Path = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let p = cfg.params()?;
    let meta = vec![
        ("g".to_string(), cfg.g.to_string()),
        ("k".to_string(), p.k.to_string()),
        ("m".to_string(), cfg.m.to_string()),
        (
            "convention".to_string(),
            convention_name(cfg.convention).to_string(),
        ),
        ("lambda".to_string(), label_text(cfg.lambda)),
        ("z".to_string(), label_text(cfg.z()?)),
    ];
    let widths = Table {
        meta: meta.clone(),
        columns: vec!["family", "transformed", "t", "norm", "mean_x", "sigma_x"],
        rows: loc
            .widths
            .iter()
            .map(|r| {
                vec![
                    r.family.name().to_string(),
                    r.transformed.to_string(),
                    r.t.to_string(),
                    num(r.moments.norm),
                    num(r.moments.mean_x),
                    num(r.moments.sigma_x),
                ]
            })
            .collect(),
    };
    let shifts = Table {
        meta,
        columns: vec![
            "family",
            "t",
            "pre_shift_residual",
            "post_shift_residual",
            "ratio",
            "shift",
        ],
        rows: loc
            .shifts
            .iter()
            .map(|r| {
                vec![
                    r.family.name().to_string(),
                    r.t.to_string(),
                    num(r.pre),
                    num(r.post),
                    num(r.ratio()),
                    num(r.shift),
                ]
            })
            .collect(),
    };
    let a = dir.join("localization.csv");
    let b = dir.join("displacement.csv");
    widths.write(&a)?;
    shifts.write(&b)?;
    Ok((loc, vec![a, b]))
}
