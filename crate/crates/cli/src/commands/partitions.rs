use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use freeprob::partitions::{count_noncrossing, interval_partitions, noncrossing_partitions};

use super::{Common, Report};
use crate::config::{default_schema, impl_config, load, set, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Non-crossing partitions.
    Nc,
    /// Interval partitions.
    Int,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartitionsConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub command: Option<String>,
    pub n: usize,
    pub kind: Kind,
    /// Print every partition after the count.
    pub list: bool,
}

impl Default for PartitionsConfig {
    fn default() -> Self {
        PartitionsConfig { schema: default_schema(), command: None, n: 4, kind: Kind::Nc, list: false }
    }
}

impl_config!(PartitionsConfig);

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub list: bool,
}

pub fn config(args: &Args) -> Result<PartitionsConfig, CliError> {
    let mut cfg: PartitionsConfig = load(args.common.config.as_deref(), "partitions")?;
    set(&mut cfg.n, args.n);
    set(&mut cfg.kind, args.kind);
    cfg.list |= args.list;
    Ok(cfg)
}

pub fn run(cfg: &PartitionsConfig) -> Result<Report, CliError> {
    let (count, listing) = match cfg.kind {
        Kind::Nc if cfg.list => {
            let ps = noncrossing_partitions(cfg.n)?;
            (ps.len() as u128, ps.iter().map(|p| p.to_string()).collect())
        }
        Kind::Nc => (count_noncrossing(cfg.n)?, Vec::new()),
        Kind::Int => {
            let ps = interval_partitions(cfg.n)?;
            let listing = if cfg.list { ps.iter().map(|p| p.to_string()).collect() } else { Vec::new() };
            (ps.len() as u128, listing)
        }
    };
    let mut text = format!("{count}\n");
    for l in &listing {
        text.push_str(l);
        text.push('\n');
    }
    let summary = serde_json::json!({
        "schema": crate::config::SCHEMA,
        "command": "partitions",
        "n": cfg.n,
        "kind": cfg.kind,
        "count": count.to_string(),
        "pass": true,
    });
    Ok(Report { summary, pass: true, text: Some(text) })
}
