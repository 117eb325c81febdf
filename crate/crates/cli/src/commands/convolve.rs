use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use freeprob::transforms::DEFAULT_EPS_LADDER;
use freeprob::{free_convolve, Measure, MeasureSpec};

use super::{describe, measure_flag, Common, Report};
use crate::config::{default_schema, impl_config, load, set, CliError, SCHEMA};
use crate::output::{line_plot_svg, write_csv};

/// Evenly spaced real points `start..=end`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealGrid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvolveConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub command: Option<String>,
    pub x: MeasureSpec,
    pub y: MeasureSpec,
    /// Evaluation grid; when absent, the sum of the supports padded by 10%
    /// with `points` points.
    pub grid: Option<RealGrid>,
    pub points: usize,
    /// Distances from the real axis, extrapolated to zero.
    pub eps_ladder: Vec<f64>,
    /// Bound on `|raw mass - 1|`.
    pub mass_tol: f64,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl Default for ConvolveConfig {
    fn default() -> Self {
        ConvolveConfig {
            schema: default_schema(),
            command: None,
            x: MeasureSpec::Semicircle { mean: 0.0, radius: 2.0 },
            y: MeasureSpec::Semicircle { mean: 0.0, radius: 2.0 },
            grid: None,
            points: 401,
            eps_ladder: DEFAULT_EPS_LADDER.to_vec(),
            mass_tol: 1e-3,
            csv: None,
            svg: None,
        }
    }
}

impl_config!(ConvolveConfig);

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,
    /// First measure as JSON, e.g. '{"kind":"semicircle","mean":0,"radius":2}'.
    #[arg(long)]
    pub x: Option<String>,
    /// Second measure as JSON.
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub eps_ladder: Option<Vec<f64>>,
    #[arg(long)]
    pub mass_tol: Option<f64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

pub fn config(args: &Args) -> Result<ConvolveConfig, CliError> {
    let mut cfg: ConvolveConfig = load(args.common.config.as_deref(), "convolve")?;
    set(&mut cfg.x, measure_flag(args.x.as_deref(), "x")?);
    set(&mut cfg.y, measure_flag(args.y.as_deref(), "y")?);
    set(&mut cfg.points, args.points);
    set(&mut cfg.eps_ladder, args.eps_ladder.clone());
    set(&mut cfg.mass_tol, args.mass_tol);
    cfg.csv = args.csv.clone().or(cfg.csv);
    cfg.svg = args.svg.clone().or(cfg.svg);
    if cfg.eps_ladder.is_empty() || cfg.eps_ladder.iter().any(|e| !(*e > 0.0)) {
        return Err(CliError::schema("eps_ladder", "needs at least one positive distance"));
    }
    if let Some(g) = cfg.grid {
        if g.count < 2 || !(g.end > g.start) {
            return Err(CliError::schema("grid", "needs count >= 2 and end > start"));
        }
    } else if cfg.points < 2 {
        return Err(CliError::schema("points", "must be at least 2"));
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct Row {
    x: f64,
    density: f64,
}

pub fn run(cfg: &ConvolveConfig) -> Result<Report, CliError> {
    let x: Measure = cfg.x.build()?;
    let y: Measure = cfg.y.build()?;
    let grid = cfg.grid.unwrap_or_else(|| {
        let (ax, bx) = x.support();
        let (ay, by) = y.support();
        let (lo, hi) = (ax + ay, bx + by);
        let pad = 0.1 * (hi - lo).max(1e-3);
        RealGrid { start: lo - pad, end: hi + pad, count: cfg.points }
    });
    let xs: Vec<f64> = (0..grid.count)
        .map(|j| grid.start + (grid.end - grid.start) * j as f64 / (grid.count - 1) as f64)
        .collect();
    let out = free_convolve(&x, &y, &xs, &cfg.eps_ladder)?;
    let mass_error = (out.raw_mass - 1.0).abs();
    let pass = mass_error <= cfg.mass_tol;
    if let Some(path) = &cfg.csv {
        let rows: Vec<Row> = xs.iter().zip(&out.density).map(|(&x, &density)| Row { x, density }).collect();
        write_csv(path, &["x", "density"], &rows)?;
    }
    if let Some(path) = &cfg.svg {
        let title = format!("{} + {}", describe(&cfg.x), describe(&cfg.y));
        fs::write(path, line_plot_svg(&xs, &out.density, &title)).map_err(|e| CliError::io(path, e))?;
    }
    let summary = serde_json::json!({
        "schema": SCHEMA,
        "command": "convolve",
        "x": cfg.x,
        "y": cfg.y,
        "grid": grid,
        "eps_ladder": cfg.eps_ladder,
        "intervals": out.intervals,
        "raw_mass": out.raw_mass,
        "mass_error": mass_error,
        "mass_tol": cfg.mass_tol,
        "pass": pass,
    });
    Ok(Report { summary, pass, text: None })
}
