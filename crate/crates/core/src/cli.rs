//! Command-line front end: one subcommand per analysis.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::config::{Config, TWO_PI};
use crate::direct_min::{minimize_with, DescentOptions, InitialProfile, Outcome};
use crate::energetics::{force, goldschmidt_constant, lower_area};
use crate::error::Error;
use crate::extremals::{critical_constants, solve_branches, Extremal};
use crate::output::{Cell, OutputRecord, Table};
use crate::spectrum::eigenvalues;
use crate::variation::{critical_direction, critical_third_variation, third_variation};

#[derive(Debug, Parser)]
#[command(name = "catenoid", version, about = "Soap-film catenoid between two coaxial unit rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Both extremals at one half-distance, with areas and stability verdicts.
    Solve {
        /// Half-distance between the rings, or `star` for h*.
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// tau* and h*.
    Critical,
    /// The half-distance at which the stable film area equals 2π.
    Goldschmidt,
    /// Lowest eigenvalues of the string problem on [-tau, tau].
    Spectrum {
        /// Half-interval, or `star` for tau*.
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Attraction force F(h) and dF/dh over a range.
    Force(RangeArgs),
    /// Roots, areas and force over a range (the data behind the area plot).
    Sweep(RangeArgs),
    /// Direct minimization of the discretized area.
    Minimize {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, value_enum, default_value_t = InitArg::Cylinder)]
        init: InitArg,
    },
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub h_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub h_max: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Cylinder,
    Lower,
    Upper,
    UpperPerturbed,
}

impl From<InitArg> for InitialProfile {
    fn from(a: InitArg) -> Self {
        match a {
            InitArg::Cylinder => InitialProfile::Cylinder,
            InitArg::Lower => InitialProfile::LowerCatenoid,
            InitArg::Upper => InitialProfile::UpperCatenoid,
            InitArg::UpperPerturbed => InitialProfile::UpperPerturbed,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_positive(name: &str, raw: &str, star: f64) -> Result<f64, CliError> {
    let v = match raw {
        "star" | "*" => star,
        _ => raw.parse::<f64>().map_err(|_| usage(format!("--{name}: cannot parse {raw:?} as a number")))?,
    };
    if !(v > 0.0 && v.is_finite()) {
        return Err(usage(format!("--{name} must be positive, got {raw}")));
    }
    Ok(v)
}

fn range(args: &RangeArgs) -> Result<Vec<f64>, CliError> {
    if !(args.h_min > 0.0 && args.h_max.is_finite()) || args.h_max < args.h_min {
        return Err(usage(format!("need 0 < h-min <= h-max, got [{}, {}]", args.h_min, args.h_max)));
    }
    match args.steps {
        0 => Err(usage("--steps must be at least 1")),
        1 => Ok(vec![args.h_min]),
        s => Ok((0..s).map(|i| args.h_min + (args.h_max - args.h_min) * i as f64 / (s - 1) as f64).collect()),
    }
}

fn verdict(e: &Extremal, lambda1: f64) -> &'static str {
    if e.is_critical() {
        "critical: no extremum"
    } else if lambda1 > 1.0 {
        "local minimum"
    } else {
        "saddle: no extremum"
    }
}

pub fn cmd_solve(h: f64, cfg: &Config) -> Result<OutputRecord, CliError> {
    let cc = critical_constants();
    let mut rec = OutputRecord::new("solve", *cfg).input("h", h);
    rec.result("h_star", cc.h_star);
    match solve_branches(h) {
        Ok((lower, upper)) => {
            rec.table = Table::new(&["branch", "tau", "c", "area", "lambda1", "verdict"]);
            let critical = lower.is_critical();
            rec.result("outcome", if critical { "critical" } else { "two_extremals" });
            let mut areas = Vec::new();
            for (name, e) in [("lower", lower), ("upper", upper)] {
                let lambda1 = eigenvalues(e.tau, 1, cfg.shoot_steps)?.lambdas[0];
                let area = e.area_closed_form();
                areas.push(area);
                rec.table.push(vec![
                    name.into(),
                    e.tau.into(),
                    e.c.into(),
                    area.into(),
                    lambda1.into(),
                    verdict(&e, lambda1).into(),
                ]);
            }
            rec.result("lower_area_below_upper", areas[0] < areas[1]);
            if critical {
                let eta = critical_direction(&lower, cfg.grid_points | 1)?;
                rec.result("delta3_quadrature", third_variation(&lower, &eta));
                rec.result("delta3_closed_form", critical_third_variation());
            }
        }
        Err(Error::NoExtremal { .. }) => {
            rec.result("outcome", "no_extremal");
            rec.result("goldschmidt_area", TWO_PI);
        }
        Err(e @ Error::Domain(_)) => return Err(usage(e.to_string())),
        Err(e) => return Err(e.into()),
    }
    Ok(rec)
}

pub fn cmd_critical(cfg: &Config) -> OutputRecord {
    let cc = critical_constants();
    let mut rec = OutputRecord::new("critical", *cfg);
    rec.result("tau_star", cc.tau_star);
    rec.result("h_star", cc.h_star);
    rec.result("residual", 1.0 - cc.tau_star * cc.tau_star.tanh());
    rec
}

pub fn cmd_goldschmidt(cfg: &Config) -> Result<OutputRecord, CliError> {
    let hg = goldschmidt_constant();
    let mut rec = OutputRecord::new("goldschmidt", *cfg);
    rec.result("h_g", hg);
    rec.result("h_star", critical_constants().h_star);
    rec.result("area_at_h_g", lower_area(hg)?);
    rec.result("two_pi", TWO_PI);
    Ok(rec)
}

pub fn cmd_spectrum(tau: f64, k: usize, cfg: &Config) -> Result<OutputRecord, CliError> {
    if k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    let modes = eigenvalues(tau, k, cfg.shoot_steps)?;
    let mut rec = OutputRecord::new("spectrum", *cfg).input("tau", tau).input("k", k);
    rec.table = Table::new(&["tau", "k", "lambda"]);
    for (i, l) in modes.lambdas.iter().enumerate() {
        rec.table.push(vec![tau.into(), (i + 1).into(), (*l).into()]);
    }
    Ok(rec)
}

pub fn cmd_force(args: &RangeArgs, cfg: &Config) -> Result<OutputRecord, CliError> {
    let hs = range(args)?;
    let rows: Vec<Result<Vec<Cell>, CliError>> = hs
        .par_iter()
        .map(|&h| match force(h) {
            Ok(f) => Ok(vec![h.into(), f.force.into(), f.dforce_dh.into()]),
            Err(Error::NoExtremal { .. }) => Ok(vec![h.into(), Cell::Missing, Cell::Missing]),
            Err(e) => Err(e.into()),
        })
        .collect();
    let mut rec = OutputRecord::new("force", *cfg)
        .input("h_min", args.h_min)
        .input("h_max", args.h_max)
        .input("steps", args.steps);
    rec.table = Table::new(&["h", "force", "dforce_dh"]);
    for row in rows {
        rec.table.push(row?);
    }
    Ok(rec)
}

pub fn cmd_sweep(args: &RangeArgs, cfg: &Config) -> Result<OutputRecord, CliError> {
    let hs = range(args)?;
    let rows: Vec<Result<Vec<Cell>, CliError>> = hs
        .par_iter()
        .map(|&h| match solve_branches(h) {
            Ok((l, u)) => {
                let f = if l.is_critical() { None } else { Some(force(h)?.force) };
                Ok(vec![
                    h.into(),
                    l.tau.into(),
                    u.tau.into(),
                    l.area_closed_form().into(),
                    u.area_closed_form().into(),
                    f.into(),
                ])
            }
            Err(Error::NoExtremal { .. }) => Ok(vec![h.into(), Cell::Missing, Cell::Missing, Cell::Missing, Cell::Missing, Cell::Missing]),
            Err(e) => Err(e.into()),
        })
        .collect();
    let mut rec = OutputRecord::new("sweep", *cfg)
        .input("h_min", args.h_min)
        .input("h_max", args.h_max)
        .input("steps", args.steps);
    rec.table = Table::new(&["h", "tau1", "tau2", "area1", "area2", "force"]);
    for row in rows {
        rec.table.push(row?);
    }
    Ok(rec)
}

pub fn cmd_minimize(h: f64, n: usize, init: InitArg, cfg: &Config) -> Result<OutputRecord, CliError> {
    if n < 64 {
        return Err(usage(format!("--n must be at least 64, got {n}")));
    }
    let opts = DescentOptions::from_config(cfg);
    let mut rec = OutputRecord::new("minimize", *cfg)
        .input("h", h)
        .input("n", n)
        .input("init", format!("{init:?}").to_lowercase());
    let report = match minimize_with(h, n, init.into(), &opts) {
        Ok(r) => r,
        Err(Error::NoExtremal { .. }) => {
            rec.result("outcome", "no_extremal");
            return Ok(rec);
        }
        Err(e) => return Err(e.into()),
    };
    let outcome = match report.outcome {
        Outcome::Converged => "converged",
        Outcome::Collapsed => "collapsed",
        Outcome::IterationLimit => "iteration_limit",
    };
    rec.result("outcome", outcome);
    rec.result("final_area", report.final_area);
    rec.result("iterations", report.iterations);
    rec.result("min_y", report.min_y);
    rec.result("gradient_norm", report.gradient_norm);
    rec.result("two_pi", TWO_PI);
    rec.table = Table::new(&["x", "y"]);
    let p = &report.final_profile;
    for i in 0..p.n() {
        rec.table.push(vec![p.grid.x(i).into(), p.y[i].into()]);
    }
    Ok(rec)
}

/// Runs one parsed invocation.
pub fn execute(cli: &Cli, cfg: &Config) -> Result<OutputRecord, CliError> {
    let cc = critical_constants();
    match &cli.command {
        Command::Solve { h } => cmd_solve(parse_positive("h", h, cc.h_star)?, cfg),
        Command::Critical => Ok(cmd_critical(cfg)),
        Command::Goldschmidt => cmd_goldschmidt(cfg),
        Command::Spectrum { tau, k } => cmd_spectrum(parse_positive("tau", tau, cc.tau_star)?, *k, cfg),
        Command::Force(args) => cmd_force(args, cfg),
        Command::Sweep(args) => cmd_sweep(args, cfg),
        Command::Minimize { h, n, init } => cmd_minimize(parse_positive("h", h, cc.h_star)?, *n, *init, cfg),
    }
}

fn emit<W: Write>(rec: &OutputRecord, format: Format, out: W) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Internal(format!("write failed: {e}"));
    match format {
        Format::Json => rec.write_json(out).map_err(io),
        Format::Csv => rec.write_csv(out).map_err(|e| CliError::Internal(format!("write failed: {e}"))),
    }
}

/// Parses `args`, runs the command and writes the record. Returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let result = execute(&cli, &Config::default()).and_then(|rec| match &cli.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            emit(&rec, cli.format, &mut w)?;
            w.flush().map_err(|e| CliError::Internal(e.to_string()))
        }
        None => emit(&rec, cli.format, std::io::stdout().lock()),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
