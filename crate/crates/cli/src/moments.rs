//! Moment table of the measure weights f and Φ against their closed forms.

use std::path::PathBuf;

use singosc_core::measures::{f_moment, PhiTable};
use singosc_core::numerics::{gamma_ln, QuadratureScheme};

use crate::config::RunConfig;
use crate::csv::{num, Table};
use crate::error::CliError;

pub const MAX_MOMENT: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub n: usize,
    pub f: f64,
    pub f_exact: f64,
    pub phi: f64,
    pub phi_exact: f64,
}

impl MomentRow {
    pub fn f_error(&self) -> f64 {
        ((self.f - self.f_exact) / self.f_exact).abs()
    }

    pub fn phi_error(&self) -> f64 {
        ((self.phi - self.phi_exact) / self.phi_exact).abs()
    }
}

/// `∫xⁿ f` vs `Γ(n+1)Γ(n+2k)` and `∫xⁿ Φ` vs `Γ(n+1)Γ(n+2k)/(n+2k+m)`.
pub fn moment_rows(cfg: &RunConfig) -> Result<Vec<MomentRow>, CliError> {
    cfg.validate()?;
    let p = cfg.params()?;
    let k = p.k;
    let s = QuadratureScheme::default();
    let table = PhiTable::new(k, cfg.m, &s)?;
    (0..=MAX_MOMENT)
        .map(|n| {
            let nf = n as f64;
            let exact = (gamma_ln(nf + 1.0)? + gamma_ln(nf + 2.0 * k)?).exp();
            Ok(MomentRow {
                n,
                f: f_moment(n, k, &s)?.value.re,
                f_exact: exact,
                phi: table.moment(n, &s)?.value.re,
                phi_exact: exact / (nf + 2.0 * k + cfg.m as f64),
            })
        })
        .collect()
}

pub fn cmd_moments(cfg: &RunConfig) -> Result<(Vec<MomentRow>, PathBuf), CliError> {
    let rows = moment_rows(cfg)?;
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let p = cfg.params()?;
    let path = dir.join("moments.csv");
    Table {
        meta: vec![
            ("g".into(), cfg.g.to_string()),
            ("k".into(), p.k.to_string()),
            ("m".into(), cfg.m.to_string()),
        ],
        columns: vec![
            "n",
            "f_moment",
            "f_exact",
            "f_rel_error",
            "phi_moment",
            "phi_exact",
            "phi_rel_error",
        ],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    num(r.f),
                    num(r.f_exact),
                    num(r.f_error()),
                    num(r.phi),
                    num(r.phi_exact),
                    num(r.phi_error()),
                ]
            })
            .collect(),
    }
    .write(&path)?;
    Ok((rows, path))
}
