use std::fmt;
use std::io::Read;

use pdeforge_core::mlpoly::Monomial;
use serde_json::{json, Value};

/// Failure that maps to exit code 2.
#[derive(Debug)]
pub enum CliError {
    Core(pdeforge_core::Error),
    Input(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(pdeforge_core::Error::SizeGuard { .. }) => "guard",
            CliError::Core(pdeforge_core::Error::Parse(_)) => "parse",
            CliError::Core(_) => "precondition",
            CliError::Input(_) => "input",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "schema": "pdeforge.error/1", "error": self.kind(), "message": self.to_string() })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Input(m) => f.write_str(m),
        }
    }
}

impl From<pdeforge_core::Error> for CliError {
    fn from(e: pdeforge_core::Error) -> Self {
        CliError::Core(e)
    }
}

/// Reads a JSON argument: inline when it starts with `{` or `[`, stdin for `-`,
/// otherwise a file path.
pub fn load_json(arg: &str) -> Result<Value, CliError> {
    let text = match arg.trim_start() {
        s if s.starts_with('{') || s.starts_with('[') => s.to_string(),
        "-" => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            buf
        }
        path => std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid JSON: {e}")))
}

/// Parses a comma-separated index list; the empty string is the empty set.
pub fn parse_indices(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Input(format!("bad index {t:?} in {s:?}"))))
        .collect()
}

pub fn parse_monomial(s: &str) -> Result<Monomial, CliError> {
    let vars = parse_indices(s)?;
    if let Some(&i) = vars.iter().find(|&&i| i >= 128) {
        return Err(CliError::Input(format!("variable index {i} exceeds 127")));
    }
    Ok(Monomial::from_vars(vars))
}

/// `u,v,w=value`, used to pin hypermatrix entries.
pub fn parse_fixed(s: &str) -> Result<pdeforge_core::circuit::FixedEntry, CliError> {
    let bad = || CliError::Input(format!("expected u,v,w=value, got {s:?}"));
    let (idx, value) = s.split_once('=').ok_or_else(bad)?;
    let idx = parse_indices(idx)?;
    let value: f64 = value.trim().parse().map_err(|_| bad())?;
    match idx.as_slice() {
        &[u, v, w] => Ok(pdeforge_core::circuit::FixedEntry { u, v, w, value }),
        _ => Err(bad()),
    }
}
