use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use crate::args::FamilyArgs;

pub const SCHEMA: u32 = 1;

/// Writes `text` to `out`, or to stdout.
pub fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// JSON document with the schema version as its first field.
pub fn json<T: Serialize>(body: &T) -> anyhow::Result<String> {
    let mut v = serde_json::to_value(body)?;
    let mut doc = serde_json::Map::new();
    doc.insert("schema".into(), SCHEMA.into());
    if let serde_json::Value::Object(m) = &mut v {
        doc.append(m);
    } else {
        doc.insert("data".into(), v);
    }
    let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(doc))?;
    s.push('\n');
    Ok(s)
}

pub fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// RunConfig ranges shared by every family-building command.
pub fn check_family_args(f: &FamilyArgs) -> anyhow::Result<()> {
    check_eps(f.eps)?;
    if !(f.gamma > 0.0 && f.gamma <= 0.5) {
        return Err(lso_core::Error::Parameter(format!("gamma must be in (0, 1/2], got {}", f.gamma)).into());
    }
    check_dim(f.dim)
}

pub fn check_eps(eps: f64) -> anyhow::Result<()> {
    if eps > 0.0 && eps <= 0.5 {
        Ok(())
    } else {
        Err(lso_core::Error::Parameter(format!("eps must be in (0, 1/2], got {eps}")).into())
    }
}

pub fn check_dim(d: usize) -> anyhow::Result<()> {
    if (1..=8).contains(&d) {
        Ok(())
    } else {
        Err(lso_core::Error::Dimension(d).into())
    }
}
