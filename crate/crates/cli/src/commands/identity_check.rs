use std::path::PathBuf;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use freeprob::identities::{eta_inverse_identities, series_all, CheckRecord, SeriesReport, ZGrid, MAX_ORDER};
use freeprob::{matsumoto_yor_pair, Measure, MeasureSpec};

use super::{check_grid, measure_flag, triple, Common, Report};
use crate::config::{default_schema, impl_config, load, set, CliError, SCHEMA};
use crate::output::write_csv;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentityCheckConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub command: Option<String>,
    /// Parameters of the pair used when `x` and `y` are absent.
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub x: Option<MeasureSpec>,
    pub y: Option<MeasureSpec>,
    /// Evaluation points; when absent, the single point `i(‖X‖ + 4‖Y‖ + 1)`.
    pub z: Option<ZGrid>,
    /// Truncation order of the D and C series; A and B stop at 5.
    pub order: usize,
    /// Added to every tail bound.
    pub slack: f64,
    /// Radius of the circle of `w` points for the η identities.
    pub eta_radius: f64,
    pub eta_points: usize,
    pub eta_tol: f64,
    pub csv: Option<PathBuf>,
}

impl Default for IdentityCheckConfig {
    fn default() -> Self {
        IdentityCheckConfig {
            schema: default_schema(),
            command: None,
            lambda: 2.0,
            alpha: 1.0,
            beta: 1.0,
            x: None,
            y: None,
            z: None,
            order: MAX_ORDER,
            slack: 1e-8,
            eta_radius: 0.02,
            eta_points: 10,
            eta_tol: 1e-7,
            csv: None,
        }
    }
}

impl_config!(IdentityCheckConfig);

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub slack: Option<f64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

pub fn config(args: &Args) -> Result<IdentityCheckConfig, CliError> {
    let mut cfg: IdentityCheckConfig = load(args.common.config.as_deref(), "identity-check")?;
    set(&mut cfg.lambda, args.lambda);
    set(&mut cfg.alpha, args.alpha);
    set(&mut cfg.beta, args.beta);
    if let Some(x) = measure_flag(args.x.as_deref(), "x")? {
        cfg.x = Some(x);
    }
    if let Some(y) = measure_flag(args.y.as_deref(), "y")? {
        cfg.y = Some(y);
    }
    set(&mut cfg.order, args.order);
    set(&mut cfg.slack, args.slack);
    cfg.csv = args.csv.clone().or(cfg.csv);
    if cfg.x.is_some() != cfg.y.is_some() {
        return Err(CliError::schema(if cfg.x.is_some() { "y" } else { "x" }, "x and y must be given together"));
    }
    if let Some(z) = &cfg.z {
        check_grid(z, "z")?;
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct Row {
    series: &'static str,
    z_re: f64,
    z_im: f64,
    n: usize,
    partial_re: f64,
    partial_im: f64,
    closed_re: f64,
    closed_im: f64,
    residual: f64,
    tail_bound: f64,
    pass: bool,
}

const HEADER: [&str; 11] = [
    "series",
    "z_re",
    "z_im",
    "n",
    "partial_re",
    "partial_im",
    "closed_re",
    "closed_im",
    "residual",
    "tail_bound",
    "pass",
];

/// One row per partial sum; the bound at order `n` is the geometric tail
/// beyond `n`.
fn rows(name: &'static str, r: &SeriesReport<f64>, slack: f64) -> Vec<Row> {
    let first = if name == "B" { 1 } else { 0 };
    r.partial_sums
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let n = first + i;
            let tail = if r.ratio < 1.0 { r.tail_bound * r.ratio.powi(n as i32 - r.order as i32) } else { f64::INFINITY };
            let residual = (s - r.closed_form).norm();
            Row {
                series: name,
                z_re: r.z.re,
                z_im: r.z.im,
                n,
                partial_re: s.re,
                partial_im: s.im,
                closed_re: r.closed_form.re,
                closed_im: r.closed_form.im,
                residual,
                tail_bound: tail,
                pass: residual <= tail + slack,
            }
        })
        .collect()
}

pub fn run(cfg: &IdentityCheckConfig) -> Result<Report, CliError> {
    let (x, y): (Measure, Measure) = match (&cfg.x, &cfg.y) {
        (Some(x), Some(y)) => (x.build()?, y.build()?),
        _ => matsumoto_yor_pair(cfg.lambda, cfg.alpha, cfg.beta)?,
    };
    let zs = match &cfg.z {
        Some(g) => g.points(),
        None => vec![Complex::new(0.0, x.norm() + 4.0 * y.norm() + 1.0)],
    };
    let sets = zs.par_iter().map(|&z| series_all(&x, &y, z, cfg.order)).collect::<Result<Vec<_>, _>>()?;
    let params: Vec<(&str, f64)> = match cfg.x {
        Some(_) => Vec::new(),
        None => triple(cfg.lambda, cfg.alpha, cfg.beta).to_vec(),
    };

    let mut table = Vec::new();
    let mut records = Vec::new();
    for s in &sets {
        let mut reports = vec![("D", &s.d), ("C", &s.c)];
        if let (Some(a), Some(b)) = (&s.a, &s.b) {
            reports.push(("A", a));
            reports.push(("B", b));
        }
        for (name, r) in reports {
            table.extend(rows(name, r, cfg.slack));
            let last = *r.partial_sums.last().expect("at least one term");
            records.push(CheckRecord::new(
                format!("series {name} (order {})", r.order),
                &params,
                Some(r.z),
                last,
                r.closed_form,
                r.tail_bound + cfg.slack,
            ));
        }
    }

    let invertible = y.atom0() == 0.0 && y.distance_from_zero() >= 1e-6;
    if invertible {
        for j in 0..cfg.eta_points {
            let t = (j as f64 + 0.5) * std::f64::consts::TAU / cfg.eta_points as f64;
            let w = Complex::from_polar(cfg.eta_radius, t);
            let e = eta_inverse_identities(&y, w)?;
            records.push(CheckRecord::new("eta^h", &params, Some(w), e.eta_h, e.eta_h_formula, cfg.eta_tol));
            records.push(CheckRecord::new("eta^hh", &params, Some(w), e.eta_hh, e.eta_hh_formula, cfg.eta_tol));
        }
    }

    if let Some(path) = &cfg.csv {
        write_csv(path, &HEADER, &table)?;
    }
    let pass = table.iter().all(|r| r.pass) && records.iter().all(|r| r.pass);
    let summary = serde_json::json!({
        "schema": SCHEMA,
        "command": "identity-check",
        "order": cfg.order,
        "pass": pass,
        "checks": records,
    });
    Ok(Report { summary, pass, text: None })
}
