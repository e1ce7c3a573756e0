//! Argument values: inline JSON, shorthand text, or fields of a problem file.

use std::path::Path;

use mst_core::json::{
    blaschke_from_json, complex_from_json, dmatrix_from_json, rational_from_json, BlaschkeJson,
    ComplexJson, RationalJson,
};
use mst_core::shorthand::{parse_blaschke, parse_rational};
use mst_core::{BlaschkeProduct, RationalFn, C64};
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

/// Anything wrong with what the user passed in. Always exit code 1.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

/// A value from the command line (raw text) or from a problem file (parsed JSON).
#[derive(Clone, Debug)]
pub enum Arg {
    Text(String),
    Json(Value),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    pub tol: Option<f64>,
    pub format: Option<String>,
}

/// Command-specific problem document; each command reads the fields it needs.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub space: Option<Value>,
    pub codomain: Option<Value>,
    pub symbol: Option<Value>,
    pub theta: Option<Value>,
    pub alpha: Option<Value>,
    pub eta: Option<Value>,
    pub gamma: Option<Value>,
    pub n: Option<usize>,
    pub w: Option<Value>,
    pub h: Option<Value>,
    pub k: Option<Value>,
    pub a: Option<Value>,
    pub b: Option<Value>,
    pub suite: Option<String>,
    #[serde(default)]
    pub options: ProblemOptions,
}

/// serde_json errors carry a line and column; keep them in the message.
fn json_error(what: &str, e: serde_json::Error) -> InputError {
    let text = e.to_string();
    let message = text
        .rsplit_once(" at line ")
        .map_or(text.as_str(), |(m, _)| m);
    InputError(format!(
        "invalid JSON in {what} at line {}, column {}: {message}",
        e.line(),
        e.column()
    ))
}

pub fn parse_json<T: DeserializeOwned>(what: &str, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| json_error(what, e))
}

fn from_value<T: DeserializeOwned>(what: &str, v: Value) -> Result<T, InputError> {
    serde_json::from_value(v).map_err(|e| InputError(format!("invalid {what}: {e}")))
}

pub fn load_problem(path: &Path) -> Result<ProblemFile, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&format!("problem file {}", path.display()), &text)
}

/// Flag wins over the problem file.
pub fn pick(flag: Option<String>, file: Option<Value>) -> Option<Arg> {
    match (flag, file) {
        (Some(t), _) => Some(Arg::Text(t)),
        (None, Some(Value::String(s))) => Some(Arg::Text(s)),
        (None, Some(v)) => Some(Arg::Json(v)),
        (None, None) => None,
    }
}

pub fn required(name: &str, arg: Option<Arg>) -> Result<Arg, InputError> {
    arg.ok_or_else(|| InputError(format!("missing --{name}")))
}

fn looks_like_json(s: &str) -> bool {
    matches!(s.trim_start().chars().next(), Some('{') | Some('['))
}

fn shorthand_error(what: &str, text: &str, e: mst_core::Error) -> InputError {
    match e {
        mst_core::Error::Parse { position, message } => InputError(format!(
            "cannot parse {what} '{text}' at position {position}: {message}"
        )),
        other => InputError(format!("invalid {what}: {other}")),
    }
}

pub fn blaschke(what: &str, arg: Arg) -> Result<BlaschkeProduct, InputError> {
    let j: BlaschkeJson = match arg {
        Arg::Text(t) if looks_like_json(&t) => parse_json(what, &t)?,
        Arg::Text(t) => return parse_blaschke(&t).map_err(|e| shorthand_error(what, &t, e)),
        Arg::Json(v) => from_value(what, v)?,
    };
    blaschke_from_json(&j).map_err(|e| InputError(format!("invalid {what}: {e}")))
}

pub fn rational(what: &str, arg: Arg) -> Result<RationalFn, InputError> {
    let j: RationalJson = match arg {
        Arg::Text(t) if looks_like_json(&t) => parse_json(what, &t)?,
        Arg::Text(t) => return parse_rational(&t).map_err(|e| shorthand_error(what, &t, e)),
        Arg::Json(v) => from_value(what, v)?,
    };
    rational_from_json(&j).map_err(|e| InputError(format!("invalid {what}: {e}")))
}

/// `[re, im]` or a constant expression such as `0.3-0.2i`.
pub fn complex(what: &str, arg: Arg) -> Result<C64, InputError> {
    let j: ComplexJson = match arg {
        Arg::Text(t) if looks_like_json(&t) => parse_json(what, &t)?,
        Arg::Text(t) => {
            let f = parse_rational(&t).map_err(|e| shorthand_error(what, &t, e))?;
            if !f.is_polynomial() || f.num().degree().unwrap_or(0) > 0 {
                return Err(InputError(format!("{what} must be a complex constant")));
            }
            return Ok(f.num().coeff(0));
        }
        Arg::Json(v) => from_value(what, v)?,
    };
    Ok(complex_from_json(j))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DenseJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<ComplexJson>>,
}

/// `{"rows", "cols", "entries"}` or a bare array of rows of `[re, im]` pairs.
pub fn matrix(what: &str, arg: Arg) -> Result<DMatrix<C64>, InputError> {
    let v: Value = match arg {
        Arg::Text(t) => parse_json(what, &t)?,
        Arg::Json(v) => v,
    };
    let dense = if v.is_array() {
        let entries: Vec<Vec<ComplexJson>> = from_value(what, v)?;
        DenseJson {
            rows: entries.len(),
            cols: entries.first().map_or(0, |r| r.len()),
            entries,
        }
    } else {
        from_value(what, v)?
    };
    dmatrix_from_json(dense.rows, dense.cols, &dense.entries)
        .map_err(|e| InputError(format!("invalid {what}: {e}")))
}
