//! Run configuration: a flat `key = value` file with `[section]` headers,
//! overridable from the command line.
//!
//! ```text
//! # free particle, Fig. 1 setup
//! [physics]
//! g = 2
//! m = 1
//! convention = paper
//!
//! [states]
//! lambda = 1.021
//! z = 0.5345224838248488
//!
//! [run]
//! times = 0, 0.5, 1, 2
//! out = figures
//!
//! [grid]
//! max = 40
//! n = 4000
//! ```
//!
//! Complex labels are written `re` or `re,im`.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use singosc_core::envelope::Convention;
use singosc_core::states::PhysParams;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub g: f64,
    pub m: usize,
    pub convention: Convention,
    pub times: Vec<f64>,
    pub grid_max: f64,
    pub grid_n: usize,
    pub lambda: Complex64,
    /// `None` means the default `(2k+1)^{−1/2}`.
    pub z: Option<Complex64>,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            g: 2.0,
            m: 1,
            convention: Convention::PaperFreeParticle,
            times: vec![0.0, 0.5, 1.0, 2.0],
            grid_max: 40.0,
            grid_n: 4000,
            lambda: Complex64::new(1.021, 0.0),
            z: None,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn params(&self) -> Result<PhysParams, CliError> {
        Ok(PhysParams::from_g(self.g)?.with_m(self.m))
    }

    /// The Perelomov label, defaulting to `(2k+1)^{−1/2}`.
    pub fn z(&self) -> Result<Complex64, CliError> {
        match self.z {
            Some(z) => Ok(z),
            None => Ok(Complex64::new(
                (2.0 * self.params()?.k + 1.0).powf(-0.5),
                0.0,
            )),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params()?;
        if self.z()?.norm() >= 1.0 {
            return Err(CliError::Invalid(format!(
                "Perelomov label |z| = {} must be < 1",
                self.z()?.norm()
            )));
        }
        if self.times.is_empty() || self.times.iter().any(|t| !t.is_finite()) {
            return Err(CliError::Invalid(
                "times must be a non-empty list of finite numbers".into(),
            ));
        }
        if !(self.grid_max > 0.0 && self.grid_max.is_finite()) {
            return Err(CliError::Invalid(format!(
                "grid max must be positive, got {}",
                self.grid_max
            )));
        }
        if self.grid_n < 64 {
            return Err(CliError::Invalid(format!(
                "grid needs at least 64 points, got {}",
                self.grid_n
            )));
        }
        if !(self.lambda.re.is_finite() && self.lambda.im.is_finite()) {
            return Err(CliError::Invalid("lambda must be finite".into()));
        }
        Ok(())
    }

    /// Reads a config file on top of the defaults.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text).map_err(|e| match e {
            CliError::Config { line, message, .. } => CliError::Config {
                path: Some(path.to_path_buf()),
                line,
                message,
            },
            other => other,
        })?;
        Ok(cfg)
    }

    /// Applies `key = value` lines; keys are `section.key` (or a bare key in
    /// the section they belong to).
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Config {
                path: None,
                line: i + 1,
                message,
            };
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err(format!("unterminated section header `{line}`")))?;
                section = name.trim().to_ascii_lowercase();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            let full = if key.contains('.') || section.is_empty() {
                key.clone()
            } else {
                format!("{section}.{key}")
            };
            self.set(&full, value).map_err(err)?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "physics.g" | "g" => self.g = parse_f64(value)?,
            "physics.m" | "m" => {
                self.m = value
                    .parse()
                    .map_err(|_| format!("`{value}` is not a non-negative integer"))?
            }
            "physics.convention" | "convention" => self.convention = parse_convention(value)?,
            "states.lambda" | "lambda" => self.lambda = parse_complex(value)?,
            "states.z" | "z" => self.z = Some(parse_complex(value)?),
            "run.times" | "times" => self.times = parse_list(value)?,
            "run.out" | "out" => self.output_dir = PathBuf::from(value),
            "grid.max" | "grid_max" => self.grid_max = parse_f64(value)?,
            "grid.n" | "grid_n" => {
                self.grid_n = value
                    .parse()
                    .map_err(|_| format!("`{value}` is not a point count"))?
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }
}

pub fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?)),
        None => Ok(Complex64::new(parse_f64(s)?, 0.0)),
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_f64)
        .collect()
}

pub fn parse_convention(s: &str) -> Result<Convention, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "paper" | "paper-free-particle" => Ok(Convention::PaperFreeParticle),
        "wronskian" | "wronskian-half-i" => Ok(Convention::WronskianHalfI),
        other => Err(format!(
            "unknown convention `{other}` (expected paper or wronskian)"
        )),
    }
}

pub fn convention_name(c: Convention) -> &'static str {
    match c {
        Convention::PaperFreeParticle => "paper",
        Convention::WronskianHalfI => "wronskian",
    }
}
