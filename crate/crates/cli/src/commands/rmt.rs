use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use freeprob::rmt::{my_empirical_check, MY_STATISTICS};

use super::{Common, Report};
use crate::config::{default_schema, impl_config, load, set, CliError, SCHEMA};
use crate::output::write_csv;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RmtConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub command: Option<String>,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub dim: usize,
    pub reps: usize,
    pub seed: u64,
    pub csv: Option<PathBuf>,
}

impl Default for RmtConfig {
    fn default() -> Self {
        RmtConfig {
            schema: default_schema(),
            command: None,
            lambda: 2.0,
            alpha: 1.0,
            beta: 1.0,
            dim: 512,
            reps: 50,
            seed: 42,
            csv: None,
        }
    }
}

impl_config!(RmtConfig);

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
    pub dim: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

pub fn config(args: &Args) -> Result<RmtConfig, CliError> {
    let mut cfg: RmtConfig = load(args.common.config.as_deref(), "rmt")?;
    set(&mut cfg.lambda, args.lambda);
    set(&mut cfg.alpha, args.alpha);
    set(&mut cfg.beta, args.beta);
    set(&mut cfg.dim, args.dim);
    set(&mut cfg.reps, args.reps);
    set(&mut cfg.seed, args.seed);
    cfg.csv = args.csv.clone().or(cfg.csv);
    Ok(cfg)
}

#[derive(Serialize)]
struct Row {
    rep: usize,
    statistic: &'static str,
    value: f64,
}

pub fn run(cfg: &RmtConfig) -> Result<Report, CliError> {
    let d = my_empirical_check(cfg.lambda, cfg.alpha, cfg.beta, cfg.dim, cfg.reps, cfg.seed)?;
    if let Some(path) = &cfg.csv {
        let rows: Vec<Row> = d
            .per_rep
            .iter()
            .enumerate()
            .flat_map(|(rep, s)| MY_STATISTICS.iter().zip(s).map(move |(&statistic, &value)| Row { rep, statistic, value }))
            .collect();
        write_csv(path, &["rep", "statistic", "value"], &rows)?;
    }
    let summary = serde_json::json!({
        "schema": SCHEMA,
        "command": "rmt",
        "lambda": d.lambda,
        "alpha": d.alpha,
        "beta": d.beta,
        "dim": d.dim,
        "reps": d.reps,
        "seed": d.seed,
        "pass": d.pass,
        "checks": d.checks,
        "histogram": d.histogram,
    });
    Ok(Report { summary, pass: d.pass, text: None })
}
