use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use freeprob::identities::ZGrid;
use freeprob::transforms::DEFAULT_SUBORDINATION_TOL;
use freeprob::{subordination, Measure, MeasureSpec};

use super::{check_grid, measure_flag, Common, Report, ZGridFlags};
use crate::config::{default_schema, impl_config, load, set, CliError, SCHEMA};
use crate::output::write_csv;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SubordConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub command: Option<String>,
    pub x: MeasureSpec,
    pub y: MeasureSpec,
    pub z: ZGrid,
    /// Stopping tolerance of the fixed-point solve.
    pub tol: f64,
    /// Bound on each residual of the subordination equations.
    pub bound: f64,
    pub csv: Option<PathBuf>,
}

impl Default for SubordConfig {
    fn default() -> Self {
        SubordConfig {
            schema: default_schema(),
            command: None,
            x: MeasureSpec::Semicircle { mean: 0.0, radius: 2.0 },
            y: MeasureSpec::FreePoisson { lambda: 2.0, gamma: 1.0 },
            z: ZGrid { start: -3.0, end: 9.0, count: 13, im: 0.5 },
            tol: DEFAULT_SUBORDINATION_TOL,
            bound: 1e-9,
            csv: None,
        }
    }
}

impl_config!(SubordConfig);

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
    #[command(flatten)]
    pub z: ZGridFlags,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub bound: Option<f64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

pub fn config(args: &Args) -> Result<SubordConfig, CliError> {
    let mut cfg: SubordConfig = load(args.common.config.as_deref(), "subord")?;
    set(&mut cfg.x, measure_flag(args.x.as_deref(), "x")?);
    set(&mut cfg.y, measure_flag(args.y.as_deref(), "y")?);
    args.z.apply(&mut cfg.z);
    set(&mut cfg.tol, args.tol);
    set(&mut cfg.bound, args.bound);
    cfg.csv = args.csv.clone().or(cfg.csv);
    check_grid(&cfg.z, "z")?;
    Ok(cfg)
}

#[derive(Serialize)]
struct Row {
    z_re: f64,
    z_im: f64,
    omega1_re: f64,
    omega1_im: f64,
    omega2_re: f64,
    omega2_im: f64,
    g_re: f64,
    g_im: f64,
    residual: f64,
    bound: f64,
    pass: bool,
}

const HEADER: [&str; 11] =
    ["z_re", "z_im", "omega1_re", "omega1_im", "omega2_re", "omega2_im", "g_re", "g_im", "residual", "bound", "pass"];

pub fn run(cfg: &SubordConfig) -> Result<Report, CliError> {
    let x: Measure = cfg.x.build()?;
    let y: Measure = cfg.y.build()?;
    let points = cfg
        .z
        .points()
        .into_par_iter()
        .map(|z| subordination(&x, &y, z, cfg.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<Row> = points
        .iter()
        .map(|p| {
            let residual = p.max_residual();
            Row {
                z_re: p.z.re,
                z_im: p.z.im,
                omega1_re: p.omega1.re,
                omega1_im: p.omega1.im,
                omega2_re: p.omega2.re,
                omega2_im: p.omega2.im,
                g_re: p.g.re,
                g_im: p.g.im,
                residual,
                bound: cfg.bound,
                pass: residual <= cfg.bound,
            }
        })
        .collect();
    if let Some(path) = &cfg.csv {
        write_csv(path, &HEADER, &rows)?;
    }
    let pass = rows.iter().all(|r| r.pass);
    let summary = serde_json::json!({
        "schema": SCHEMA,
        "command": "subord",
        "x": cfg.x,
        "y": cfg.y,
        "points": rows.len(),
        "max_residual": rows.iter().map(|r| r.residual).fold(0.0, f64::max),
        "bound": cfg.bound,
        "pass": pass,
        "table": rows,
    });
    Ok(Report { summary, pass, text: None })
}
