//! Flat `key = value` parameter files. One assignment per line, `#` starts a
//! comment, every parameter must appear exactly once.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::params::{FullParams, PARAM_KEYS};

/// Parses a parameter file. Errors carry the offending line number.
pub fn read_params(path: &Path) -> Result<FullParams> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::ConfigFile {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_params(&text, &path.display().to_string())
}

pub fn parse_params(text: &str, path: &str) -> Result<FullParams> {
    let line_err = |line: usize, message: String| Error::ConfigLine {
        path: path.to_string(),
        line,
        message,
    };
    let mut seen: HashMap<&str, f64> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| line_err(lineno, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        let Some(canonical) = PARAM_KEYS.iter().find(|k| **k == key) else {
            return Err(line_err(lineno, format!("unknown parameter `{key}`")));
        };
        let parsed: f64 = value
            .parse()
            .map_err(|_| line_err(lineno, format!("cannot parse `{value}` as a number")))?;
        if seen.insert(canonical, parsed).is_some() {
            return Err(line_err(lineno, format!("duplicate parameter `{key}`")));
        }
    }
    let mut missing = PARAM_KEYS.iter().filter(|k| !seen.contains_key(*k));
    if let Some(key) = missing.next() {
        return Err(Error::ConfigFile {
            path: path.to_string(),
            message: format!("missing parameter `{key}`"),
        });
    }
    let mut p = FullParams {
        r: 0.0,
        m: 0.0,
        a_u: 0.0,
        a_v: 0.0,
        mu_u: 0.0,
        mu_v: 0.0,
        beta_u: 0.0,
        beta_v: 0.0,
        gamma: 0.0,
        lambda: 0.0,
        delta: 0.0,
        c_ss: 0.0,
        c_su: 0.0,
        c_sv: 0.0,
        c_us: 0.0,
        c_uu: 0.0,
        c_uv: 0.0,
        c_vs: 0.0,
        c_vu: 0.0,
        c_vv: 0.0,
        epsilon: 0.0,
    };
    for (key, value) in &seen {
        p.set(key, *value)?;
    }
    p.validate()?;
    Ok(p)
}

/// Serializes in canonical key order with enough digits that reading the
/// file back reproduces every value bit for bit.
pub fn format_params(p: &FullParams) -> String {
    let mut out = String::new();
    for key in PARAM_KEYS {
        writeln!(out, "{key} = {:.16e}", p.get(key).unwrap()).unwrap();
    }
    out
}

pub fn write_params(path: &Path, p: &FullParams) -> Result<()> {
    Ok(std::fs::write(path, format_params(p))?)
}
