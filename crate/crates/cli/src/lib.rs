//! Command-line front end for `singosc-core`: figure data, verification
//! suites and parameter studies.

pub mod config;
pub mod csv;
pub mod error;
pub mod figures;
pub mod moments;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{parse_complex, parse_convention, parse_list, RunConfig};
pub use error::CliError;
use verify::Suite;

#[derive(Debug, Parser)]
#[command(
    name = "singosc",
    version,
    about = "Singular-oscillator coherent states and Darboux transformations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write one density CSV per state, family and time.
    Density(RunArgs),
    /// Run verification suites; exits nonzero on any FAIL.
    Verify {
        /// all | states | algebra | darboux | measures
        #[arg(default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        /// Replace every check's tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Widths of all densities and the displacement metric original → transformed.
    Localization(RunArgs),
    /// Moments of the measure weights against their closed forms.
    Moments(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Config file (`key = value` with `[section]`s); flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Coupling g > −1/4 of the g/x² term
    #[arg(long)]
    pub g: Option<f64>,
    /// Darboux order m
    #[arg(long)]
    pub m: Option<usize>,
    /// paper | wronskian
    #[arg(long)]
    pub convention: Option<String>,
    /// Comma-separated times.
    #[arg(long)]
    pub times: Option<String>,
    /// BG label, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Perelomov label, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Right end of the radial grid
    #[arg(long)]
    pub grid_max: Option<f64>,
    /// Number of radial grid points
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s)
        .ok_or_else(|| format!("unknown suite `{s}` (all, states, algebra, darboux, measures)"))
}

impl RunArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        let flag = |name: &str, e: String| CliError::Invalid(format!("--{name}: {e}"));
        if let Some(g) = self.g {
            cfg.g = g;
        }
        if let Some(m) = self.m {
            cfg.m = m;
        }
        if let Some(c) = &self.convention {
            cfg.convention = parse_convention(c).map_err(|e| flag("convention", e))?;
        }
        if let Some(t) = &self.times {
            cfg.times = parse_list(t).map_err(|e| flag("times", e))?;
        }
        if let Some(l) = &self.lambda {
            cfg.lambda = parse_complex(l).map_err(|e| flag("lambda", e))?;
        }
        if let Some(z) = &self.z {
            cfg.z = Some(parse_complex(z).map_err(|e| flag("z", e))?);
        }
        if let Some(x) = self.grid_max {
            cfg.grid_max = x;
        }
        if let Some(n) = self.grid_n {
            cfg.grid_n = n;
        }
        if let Some(o) = &self.out {
            cfg.output_dir = o.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs a parsed command, writing its report to `out`; returns the process
/// exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let stdout = PathBuf::from("<stdout>");
    let io = |e| CliError::io(&stdout, e);
    match cli.command {
        Command::Density(a) => {
            let cfg = a.resolve()?;
            for p in figures::cmd_density(&cfg)? {
                writeln!(out, "{}", p.display()).map_err(io)?;
            }
            Ok(0)
        }
        Command::Verify {
            suite,
            tolerance,
            run,
        } => {
            let cfg = run.resolve()?;
            let start = std::time::Instant::now();
            let mut report = verify::run(suite, cfg.g)?;
            if let Some(tol) = tolerance {
                report.checks = report
                    .checks
                    .into_iter()
                    .map(|c| c.with_tolerance(tol))
                    .collect();
            }
            for c in &report.checks {
                writeln!(out, "{c}").map_err(io)?;
            }
            let failures = report.failures();
            writeln!(
                out,
                "summary checks={} failures={} seconds={:.1}",
                report.checks.len(),
                failures,
                start.elapsed().as_secs_f64()
            )
            .map_err(io)?;
            Ok(if failures == 0 { 0 } else { 1 })
        }
        Command::Localization(a) => {
            let cfg = a.resolve()?;
            let (loc, paths) = figures::cmd_localization(&cfg)?;
            writeln!(out, "family,transformed,t,norm,mean_x,sigma_x").map_err(io)?;
            for r in &loc.widths {
                writeln!(
                    out,
                    "{},{},{},{:.8},{:.8},{:.8}",
                    r.family.name(),
                    r.transformed,
                    r.t,
                    r.moments.norm,
                    r.moments.mean_x,
                    r.moments.sigma_x
                )
                .map_err(io)?;
            }
            writeln!(out, "family,t,pre_shift,post_shift,ratio,shift").map_err(io)?;
            for r in &loc.shifts {
                writeln!(
                    out,
                    "{},{},{:.6e},{:.6e},{:.6},{:.6}",
                    r.family.name(),
                    r.t,
                    r.pre,
                    r.post,
                    r.ratio(),
                    r.shift
                )
                .map_err(io)?;
            }
            for p in paths {
                writeln!(out, "{}", p.display()).map_err(io)?;
            }
            Ok(0)
        }
        Command::Moments(a) => {
            let cfg = a.resolve()?;
            let (rows, path) = moments::cmd_moments(&cfg)?;
            writeln!(
                out,
                "n,f_moment,f_exact,f_rel_error,phi_moment,phi_exact,phi_rel_error"
            )
            .map_err(io)?;
            for r in rows {
                writeln!(
                    out,
                    "{},{:.12e},{:.12e},{:.2e},{:.12e},{:.12e},{:.2e}",
                    r.n,
                    r.f,
                    r.f_exact,
                    r.f_error(),
                    r.phi,
                    r.phi_exact,
                    r.phi_error()
                )
                .map_err(io)?;
            }
            writeln!(out, "{}", path.display()).map_err(io)?;
            Ok(0)
        }
    }
}
