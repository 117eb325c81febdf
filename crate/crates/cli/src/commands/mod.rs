pub mod characterize;
pub mod convolve;
pub mod identity_check;
pub mod my_verify;
pub mod partitions;
pub mod rmt;
pub mod subord;

use std::path::PathBuf;

use freeprob::identities::ZGrid;
use freeprob::MeasureSpec;

use crate::config::{parse, CliError};

/// Flags accepted by every subcommand.
#[derive(Debug, clap::Args)]
pub struct Common {
    /// JSON configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the default configuration and exit.
    #[arg(long)]
    pub show_defaults: bool,
    /// Also write the JSON summary to this file.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Result of a successful run.
pub struct Report {
    pub summary: serde_json::Value,
    /// Conjunction of every pass flag.
    pub pass: bool,
    /// Replaces the JSON summary on stdout when set.
    pub text: Option<String>,
}

/// Overrides for a [`ZGrid`].
#[derive(Debug, clap::Args)]
pub struct ZGridFlags {
    #[arg(long)]
    pub z_start: Option<f64>,
    #[arg(long)]
    pub z_end: Option<f64>,
    #[arg(long)]
    pub z_count: Option<usize>,
    #[arg(long)]
    pub z_im: Option<f64>,
}

impl ZGridFlags {
    pub fn apply(&self, g: &mut ZGrid) {
        crate::config::set(&mut g.start, self.z_start);
        crate::config::set(&mut g.end, self.z_end);
        crate::config::set(&mut g.count, self.z_count);
        crate::config::set(&mut g.im, self.z_im);
    }
}

/// Rejects grids without points or off the upper half-plane.
pub fn check_grid(g: &ZGrid, path: &str) -> Result<(), CliError> {
    if g.count == 0 {
        return Err(CliError::schema(format!("{path}.count"), "must be at least 1"));
    }
    if !(g.im > 0.0) {
        return Err(CliError::schema(format!("{path}.im"), "must be positive"));
    }
    if !(g.start.is_finite() && g.end.is_finite()) {
        return Err(CliError::schema(format!("{path}.start"), "must be finite"));
    }
    Ok(())
}

/// A measure given on the command line as a JSON object.
pub fn measure_flag(text: Option<&str>, field: &str) -> Result<Option<MeasureSpec>, CliError> {
    text.map(|t| parse(t, field)).transpose()
}

/// `(name, value)` pairs of a parameter triple.
pub fn triple(lambda: f64, alpha: f64, beta: f64) -> [(&'static str, f64); 3] {
    [("lambda", lambda), ("alpha", alpha), ("beta", beta)]
}

/// Pretty name of a [`MeasureSpec`] for plot titles.
pub fn describe(m: &MeasureSpec) -> String {
    match m {
        MeasureSpec::PointMass { c } => format!("point mass at {c}"),
        MeasureSpec::Semicircle { mean, radius } => format!("semicircle({mean}, {radius})"),
        MeasureSpec::FreePoisson { lambda, gamma } => format!("free Poisson({lambda}, {gamma})"),
        MeasureSpec::FreeGig { lambda, alpha, beta } => format!("free GIG({lambda}, {alpha}, {beta})"),
    }
}
