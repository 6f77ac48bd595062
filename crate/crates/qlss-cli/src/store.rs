//! `.qlsi` instance files: JSON with row-major `[re, im]` pairs.

use std::path::Path;

use qlss::{CMat, CVec, LinearSystemInstance, C64};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub const QLSI_VERSION: u64 = 1;

fn pair(z: &C64) -> Value {
    json!([z.re, z.im])
}

/// Canonical JSON text of an instance.
pub fn instance_to_json(inst: &LinearSystemInstance) -> String {
    let a = inst.a();
    let entries: Vec<Value> = (0..a.nrows()).flat_map(|i| (0..a.ncols()).map(move |j| pair(&a[(i, j)]))).collect();
    let doc = json!({
        "version": QLSI_VERSION,
        "rows": a.nrows(),
        "cols": a.ncols(),
        "kappa": inst.kappa(),
        "a": entries,
        "b": inst.b().iter().map(pair).collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("instance json");
    s.push('\n');
    s
}

fn parse_err(field: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Parse { field: field.into(), msg: msg.into() }
}

fn uint(doc: &Value, field: &str) -> CliResult<u64> {
    doc.get(field)
        .ok_or_else(|| parse_err(field, "missing"))?
        .as_u64()
        .ok_or_else(|| parse_err(field, "expected a nonnegative integer"))
}

fn complex(v: &Value, field: &str) -> CliResult<C64> {
    match v.as_array().map(|p| p.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(parse_err(field, "pair entries must be numbers")),
        },
        _ => Err(parse_err(field, format!("expected [re, im] pair, found {v}"))),
    }
}

fn complex_list(doc: &Value, field: &str, len: usize) -> CliResult<Vec<C64>> {
    let arr = doc.get(field).ok_or_else(|| parse_err(field, "missing"))?;
    let arr = arr.as_array().ok_or_else(|| parse_err(field, "expected an array"))?;
    if arr.len() != len {
        return Err(parse_err(field, format!("expected {len} entries, found {}", arr.len())));
    }
    arr.iter().enumerate().map(|(k, v)| complex(v, &format!("{field}[{k}]"))).collect()
}

pub fn instance_from_json(text: &str) -> CliResult<LinearSystemInstance> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| parse_err("<document>", format!("line {} column {}: {e}", e.line(), e.column())))?;
    if !doc.is_object() {
        return Err(parse_err("<document>", "expected a JSON object"));
    }
    let version = uint(&doc, "version")?;
    if version != QLSI_VERSION {
        return Err(CliError::Version { found: version, expected: QLSI_VERSION });
    }
    let known = ["version", "rows", "cols", "kappa", "a", "b"];
    if let Some(k) = doc.as_object().unwrap().keys().find(|k| !known.contains(&k.as_str())) {
        return Err(parse_err(k.clone(), "unknown field"));
    }
    let rows = uint(&doc, "rows")? as usize;
    let cols = uint(&doc, "cols")? as usize;
    let kappa = doc
        .get("kappa")
        .ok_or_else(|| parse_err("kappa", "missing"))?
        .as_f64()
        .ok_or_else(|| parse_err("kappa", "expected a number"))?;
    let a = complex_list(&doc, "a", rows * cols)?;
    let b = complex_list(&doc, "b", rows)?;
    Ok(LinearSystemInstance::new(CMat::from_row_slice(rows, cols, &a), CVec::from_vec(b), kappa)?)
}

pub fn store_instance(inst: &LinearSystemInstance, path: &Path) -> CliResult<()> {
    std::fs::write(path, instance_to_json(inst)).map_err(|e| CliError::io(path, e))
}

pub fn load_instance(path: &Path) -> CliResult<LinearSystemInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    instance_from_json(&text)
}
