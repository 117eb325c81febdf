use std::path::PathBuf;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use freeprob::identities::{CheckRecord, MatsumotoYorSetup, ZGrid};
use freeprob::transforms::cauchy;
use freeprob::{make_free_gig, MeasureKind};

use super::{check_grid, triple, Common, Report, ZGridFlags};
use crate::config::{default_schema, impl_config, load, set, CliError, SCHEMA};
use crate::output::write_csv;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MyVerifyConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub command: Option<String>,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub z: ZGrid,
    /// Bound for the four regression equations.
    pub regression_tol: f64,
    /// Bound for the scalar consistency identities.
    pub consistency_tol: f64,
    /// Bound on `|G_{X⊞Y} - G_{μ(λ,α,β)}|`.
    pub sum_tol: f64,
    /// Bound on the quadratic residual of the free-GIG Cauchy transform.
    pub quadratic_tol: f64,
    pub csv: Option<PathBuf>,
}

impl Default for MyVerifyConfig {
    fn default() -> Self {
        MyVerifyConfig {
            schema: default_schema(),
            command: None,
            lambda: 2.0,
            alpha: 1.0,
            beta: 1.0,
            z: ZGrid { start: -2.0, end: 10.0, count: 10, im: 0.5 },
            regression_tol: 1e-6,
            consistency_tol: 1e-7,
            sum_tol: 1e-6,
            quadratic_tol: 1e-9,
            csv: None,
        }
    }
}

impl_config!(MyVerifyConfig);

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
    #[command(flatten)]
    pub z: ZGridFlags,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

pub fn config(args: &Args) -> Result<MyVerifyConfig, CliError> {
    let mut cfg: MyVerifyConfig = load(args.common.config.as_deref(), "my-verify")?;
    set(&mut cfg.lambda, args.lambda);
    set(&mut cfg.alpha, args.alpha);
    set(&mut cfg.beta, args.beta);
    args.z.apply(&mut cfg.z);
    cfg.csv = args.csv.clone().or(cfg.csv);
    check_grid(&cfg.z, "z")?;
    Ok(cfg)
}

#[derive(Serialize)]
struct Row<'a> {
    check: &'a str,
    z_re: Option<f64>,
    z_im: Option<f64>,
    lhs_re: f64,
    lhs_im: f64,
    rhs_re: f64,
    rhs_im: f64,
    residual: f64,
    bound: f64,
    pass: bool,
}

const HEADER: [&str; 10] =
    ["check", "z_re", "z_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "bound", "pass"];

pub fn run(cfg: &MyVerifyConfig) -> Result<Report, CliError> {
    let (l, a, b) = (cfg.lambda, cfg.alpha, cfg.beta);
    let params = triple(l, a, b);
    let setup = MatsumotoYorSetup::new(l, a, b)?;
    let sum_law = make_free_gig(l, a, b)?;
    let gig = match sum_law.kind() {
        MeasureKind::FreeGig(p) => *p,
        _ => unreachable!("make_free_gig returns a free GIG law"),
    };

    let per_z = cfg
        .z
        .points()
        .into_par_iter()
        .map(|z| -> Result<Vec<CheckRecord>, freeprob::Error> {
            let p = setup.subordination(z)?;
            let mut out = Vec::new();
            for k in [1, -1, 2, -2] {
                let r = setup.regression_at(k, &p)?;
                out.push(CheckRecord::new(format!("regression k={k}"), &params, Some(z), r.lhs, r.rhs, cfg.regression_tol));
            }
            let g = cauchy(&sum_law, z)?;
            out.push(CheckRecord::new("sum law", &params, Some(z), p.g, g, cfg.sum_tol));
            let q = gig.quadratic_residual(z, g);
            out.push(CheckRecord::new("free GIG quadratic", &params, Some(z), q, Complex::new(0.0, 0.0), cfg.quadratic_tol));
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut records: Vec<CheckRecord> = per_z.into_iter().flatten().collect();
    for (name, lhs, rhs) in setup.consistency() {
        records.push(CheckRecord::new(
            name,
            &params,
            None,
            Complex::new(lhs, 0.0),
            Complex::new(rhs, 0.0),
            cfg.consistency_tol,
        ));
    }

    if let Some(path) = &cfg.csv {
        let rows: Vec<Row> = records
            .iter()
            .map(|r| Row {
                check: &r.check,
                z_re: r.z.map(|z| z[0]),
                z_im: r.z.map(|z| z[1]),
                lhs_re: r.lhs[0],
                lhs_im: r.lhs[1],
                rhs_re: r.rhs[0],
                rhs_im: r.rhs[1],
                residual: r.residual,
                bound: r.bound,
                pass: r.pass,
            })
            .collect();
        write_csv(path, &HEADER, &rows)?;
    }
    let pass = records.iter().all(|r| r.pass);
    let summary = serde_json::json!({
        "schema": SCHEMA,
        "command": "my-verify",
        "lambda": l,
        "alpha": a,
        "beta": b,
        "constants": setup.constants,
        "pass": pass,
        "checks": records,
    });
    Ok(Report { summary, pass, text: None })
}
