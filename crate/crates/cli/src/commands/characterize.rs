use serde::{Deserialize, Serialize};

use freeprob::identities::{characterize_from_constants, derive_constants, Case, CaseConstants, CheckRecord};

use super::{triple, Common, Report};
use crate::config::{default_schema, impl_config, load, set, CliError, SCHEMA};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CharacterizeConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub command: Option<String>,
    /// One case, or all three when absent.
    pub case: Option<Case>,
    /// Parameters for a round trip through the derived constants.
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// Regression constants given directly; they replace derived ones.
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub b: Option<f64>,
    pub h: Option<f64>,
    pub gamma: Option<f64>,
    pub phi_u: Option<f64>,
    pub phi_u2: Option<f64>,
    /// Bound on the round-trip error of each parameter.
    pub tol: f64,
}

impl Default for CharacterizeConfig {
    fn default() -> Self {
        CharacterizeConfig {
            schema: default_schema(),
            command: None,
            case: None,
            lambda: None,
            alpha: None,
            beta: None,
            c: None,
            d: None,
            b: None,
            h: None,
            gamma: None,
            phi_u: None,
            phi_u2: None,
            tol: 1e-6,
        }
    }
}

impl_config!(CharacterizeConfig);

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,
    /// `1,-1`, `1,2` or `-1,-2`.
    #[arg(long, allow_hyphen_values = true)]
    pub case: Option<Case>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi_u: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi_u2: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

pub fn config(args: &Args) -> Result<CharacterizeConfig, CliError> {
    let mut cfg: CharacterizeConfig = load(args.common.config.as_deref(), "characterize")?;
    for (slot, flag) in [
        (&mut cfg.lambda, args.lambda),
        (&mut cfg.alpha, args.alpha),
        (&mut cfg.beta, args.beta),
        (&mut cfg.c, args.c),
        (&mut cfg.d, args.d),
        (&mut cfg.b, args.b),
        (&mut cfg.h, args.h),
        (&mut cfg.gamma, args.gamma),
        (&mut cfg.phi_u, args.phi_u),
        (&mut cfg.phi_u2, args.phi_u2),
    ] {
        if flag.is_some() {
            *slot = flag;
        }
    }
    if args.case.is_some() {
        cfg.case = args.case;
    }
    set(&mut cfg.tol, args.tol);
    Ok(cfg)
}

/// Constants each case reads.
fn required(case: Case) -> &'static [&'static str] {
    match case {
        Case::OneMinusOne => &["c", "d", "gamma"],
        Case::OneTwo => &["c", "b", "phi_u", "phi_u2"],
        Case::MinusOneMinusTwo => &["d", "h", "gamma"],
    }
}

impl CharacterizeConfig {
    fn explicit(&self) -> [(&'static str, Option<f64>); 7] {
        [
            ("c", self.c),
            ("d", self.d),
            ("b", self.b),
            ("h", self.h),
            ("gamma", self.gamma),
            ("phi_u", self.phi_u),
            ("phi_u2", self.phi_u2),
        ]
    }

    fn has_explicit(&self) -> bool {
        self.explicit().iter().any(|(_, v)| v.is_some())
    }

    /// The parameter triple, defaulting to `(2, 1, 1)` when neither it nor
    /// any constant is given.
    fn parameters(&self) -> Result<Option<(f64, f64, f64)>, CliError> {
        match (self.lambda, self.alpha, self.beta) {
            (Some(l), Some(a), Some(b)) => Ok(Some((l, a, b))),
            (None, None, None) if !self.has_explicit() => Ok(Some((2.0, 1.0, 1.0))),
            (None, None, None) => Ok(None),
            _ => Err(CliError::schema(
                if self.lambda.is_none() { "lambda" } else if self.alpha.is_none() { "alpha" } else { "beta" },
                "lambda, alpha and beta must be given together",
            )),
        }
    }
}

pub fn run(cfg: &CharacterizeConfig) -> Result<Report, CliError> {
    let cases: Vec<Case> = cfg.case.map(|c| vec![c]).unwrap_or_else(|| Case::ALL.to_vec());
    let params = cfg.parameters()?;
    let mut k = match params {
        Some((l, a, b)) => derive_constants(l, a, b)?,
        None => CaseConstants { c: f64::NAN, d: f64::NAN, b: f64::NAN, h: f64::NAN, phi_u: f64::NAN, phi_u2: f64::NAN, gamma: f64::NAN },
    };
    for (name, v) in cfg.explicit() {
        if let Some(v) = v {
            match name {
                "c" => k.c = v,
                "d" => k.d = v,
                "b" => k.b = v,
                "h" => k.h = v,
                "gamma" => k.gamma = v,
                "phi_u" => k.phi_u = v,
                _ => k.phi_u2 = v,
            }
        }
    }
    let round_trip = params.filter(|_| !cfg.has_explicit());
    let mut results = Vec::new();
    let mut records = Vec::new();
    for case in cases {
        if params.is_none() {
            let given: Vec<&str> = cfg.explicit().iter().filter(|(_, v)| v.is_some()).map(|(n, _)| *n).collect();
            if let Some(missing) = required(case).iter().find(|n| !given.contains(n)) {
                return Err(CliError::schema(*missing, format!("case {case} needs this constant")));
            }
        }
        let ch = characterize_from_constants(case, &k)?;
        if let Some((l, a, b)) = round_trip {
            let p = triple(l, a, b);
            for (name, got, want) in [("lambda", ch.lambda, l), ("alpha", ch.alpha, a), ("beta", ch.beta, b)] {
                records.push(CheckRecord::new(
                    format!("round trip {name} (case {case})"),
                    &p,
                    None,
                    got.into(),
                    want.into(),
                    cfg.tol,
                ));
            }
        }
        results.push(ch);
    }
    let pass = records.iter().all(|r| r.pass);
    let summary = serde_json::json!({
        "schema": SCHEMA,
        "command": "characterize",
        "constants": k,
        "results": results,
        "pass": pass,
        "checks": records,
    });
    Ok(Report { summary, pass, text: None })
}
