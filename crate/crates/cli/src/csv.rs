//! Plain CSV with a `#`-prefixed metadata header. Numbers are written with 17
//! significant digits, so files are bit-reproducible and round-trip exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::CliError;

/// Formats a value with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct Table<'a> {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'a str>,
    pub rows: Vec<Vec<String>>,
}

impl Table<'_> {
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut w = BufWriter::new(file);
        let io = |e| CliError::io(path, e);
        for (k, v) in &self.meta {
            writeln!(w, "# {k} = {v}").map_err(io)?;
        }
        writeln!(w, "{}", self.columns.join(",")).map_err(io)?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(",")).map_err(io)?;
        }
        w.flush().map_err(io)
    }
}

/// Writes two numeric columns.
pub fn write_xy(
    path: &Path,
    meta: Vec<(String, String)>,
    names: [&str; 2],
    x: &[f64],
    y: &[f64],
) -> Result<(), CliError> {
    Table {
        meta,
        columns: names.to_vec(),
        rows: x
            .iter()
            .zip(y)
            .map(|(a, b)| vec![num(*a), num(*b)])
            .collect(),
    }
    .write(path)
}

/// Reads a file written by [`write_xy`]: metadata pairs and the two columns.
pub fn read_xy(path: &Path) -> Result<(Vec<(String, String)>, Vec<f64>, Vec<f64>), CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut meta = Vec::new();
    let (mut x, mut y) = (Vec::new(), Vec::new());
    let mut header_seen = false;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        let bad = |m: &str| CliError::Config {
            path: Some(path.to_path_buf()),
            line: i + 1,
            message: m.to_string(),
        };
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| bad("expected two columns"))?;
        x.push(a.parse().map_err(|_| bad("bad number"))?);
        y.push(b.parse().map_err(|_| bad("bad number"))?);
    }
    Ok((meta, x, y))
}

/// Trapezoid rule on the sample points, with the density taken to vanish at
/// `x = 0` (all radial densities here do).
pub fn trapezoid_from_origin(x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    let (mut xp, mut yp) = (0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        s += 0.5 * (a - xp) * (b + yp);
        xp = a;
        yp = b;
    }
    s
}
