//! Loading, validation and overriding of run configurations.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

/// Version of the JSON documents read and written by the CLI.
pub const SCHEMA: u32 = 1;

/// Failures of a CLI run, each with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration: malformed JSON, unknown or mistyped field.
    /// Exit 2.
    Schema { path: String, message: String },
    /// Domain or numeric failure inside the toolkit. Exit 1.
    Toolkit(freeprob::Error),
    /// Reading or writing a file. Exit 1.
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema { path: path.into(), message: message.into() }
    }

    pub fn io(path: &Path, e: impl fmt::Display) -> Self {
        CliError::Io { path: path.to_path_buf(), message: e.to_string() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema { .. } => 2,
            _ => 1,
        }
    }

    /// Diagnostic document printed on failure.
    pub fn diagnostic(&self, command: &str) -> serde_json::Value {
        let error = match self {
            CliError::Schema { path, message } => {
                serde_json::json!({ "kind": "schema", "path": path, "message": message })
            }
            CliError::Toolkit(e) => {
                let (kind, trace) = match e {
                    freeprob::Error::Domain(_) => ("domain", Vec::new()),
                    freeprob::Error::Numeric { trace, .. } => ("numeric", trace.clone()),
                    freeprob::Error::Invariant(_) => ("invariant", Vec::new()),
                };
                serde_json::json!({ "kind": kind, "message": e.to_string(), "trace": trace })
            }
            CliError::Io { path, message } => {
                serde_json::json!({ "kind": "io", "path": path, "message": message })
            }
        };
        serde_json::json!({ "schema": SCHEMA, "command": command, "pass": false, "error": error })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema { path, message } => write!(f, "invalid configuration at `{path}`: {message}"),
            CliError::Toolkit(e) => write!(f, "{e}"),
            CliError::Io { path, message } => write!(f, "{}: {message}", path.display()),
        }
    }
}

impl From<freeprob::Error> for CliError {
    fn from(e: freeprob::Error) -> Self {
        CliError::Toolkit(e)
    }
}

/// Fields shared by every configuration document.
pub trait Config: Default + Serialize + DeserializeOwned {
    fn schema(&self) -> u32;
    fn command(&self) -> Option<&str>;
}

/// Parses `text` as `T`, reporting the path of the offending field.
pub fn parse<T: DeserializeOwned>(text: &str, prefix: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix, inner.as_str()) {
            ("", p) => p.to_string(),
            (p, ".") => p.to_string(),
            (p, q) => format!("{p}.{q}"),
        };
        CliError::schema(path, e.inner().to_string())
    })
}

/// The configuration in `path`, or the defaults. Checks the schema version
/// and, when present, the command name.
pub fn load<C: Config>(path: Option<&Path>, command: &str) -> Result<C, CliError> {
    let Some(path) = path else { return Ok(C::default()) };
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let cfg: C = parse(&text, "")?;
    if cfg.schema() != SCHEMA {
        return Err(CliError::schema("schema", format!("unsupported schema {}, expected {SCHEMA}", cfg.schema())));
    }
    if let Some(c) = cfg.command() {
        if c != command {
            return Err(CliError::schema("command", format!("configuration is for `{c}`, not `{command}`")));
        }
    }
    Ok(cfg)
}

/// Replaces `slot` with the flag value when one was given.
pub fn set<T>(slot: &mut T, flag: Option<T>) {
    if let Some(v) = flag {
        *slot = v;
    }
}

pub fn default_schema() -> u32 {
    SCHEMA
}

/// Implements [`Config`] for structs with `schema` and `command` fields.
macro_rules! impl_config {
    ($($t:ty),* $(,)?) => {
        $(impl $crate::config::Config for $t {
            fn schema(&self) -> u32 {
                self.schema
            }
            fn command(&self) -> Option<&str> {
                self.command.as_deref()
            }
        })*
    };
}
pub(crate) use impl_config;
