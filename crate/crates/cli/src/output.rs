//! Deterministic JSON and CSV writing. Every float is printed with 17
//! significant digits so identical runs give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use harmonic_core::{DensityKind, DensityModel};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub args: Vec<String>,
    pub model: Option<Value>,
    pub parameters: Value,
    pub tolerances: Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub outputs: Vec<String>,
}

pub fn model_value(model: &DensityModel) -> Value {
    let kind = match model.kind() {
        DensityKind::Euclidean { n } => json!({"family": "euclidean", "n": n}),
        DensityKind::Hyperbolic { n } => json!({"family": "hyperbolic", "n": n}),
        DensityKind::DamekRicci { m, k } => json!({"family": "damek-ricci", "m": m, "k": k}),
        DensityKind::Custom { n, expr } => json!({"family": "custom", "n": n, "theta": expr}),
    };
    json!({"name": model.name(), "dim": model.dim(), "h": model.h(), "kind": kind})
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn escape(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize, out: &mut String| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => {
                let _ = write!(out, "{u}");
            }
            (_, Some(i)) => {
                let _ = write!(out, "{i}");
            }
            _ => out.push_str(&fmt_f64(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => escape(s, out),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(indent + 2, out);
                write_value(item, indent + 2, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(indent + 2, out);
                escape(k, out);
                out.push_str(": ");
                write_value(item, indent + 2, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push('}');
        }
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

/// `{"manifest": …, <report fields>}` as text.
pub fn json_text(manifest: &Manifest, report: Value) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert("manifest".into(), to_value(manifest));
    match report {
        Value::Object(map) => doc.extend(map),
        other => {
            doc.insert("report".into(), other);
        }
    }
    to_json_string(&Value::Object(doc))
}

/// CSV text whose first line is `# manifest: <one-line JSON>`.
pub fn csv_text(manifest: &Manifest, header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.write_record(row.iter().map(|x| fmt_f64(*x))).expect("write to memory");
    }
    let body = w.into_inner().expect("flush to memory");
    let mut text = format!("# manifest: {}\n", serde_json::to_string(&to_value(manifest)).unwrap_or_default());
    text.push_str(&String::from_utf8_lossy(&body));
    text
}

/// The manifest embedded in a file written from [`json_text`] or [`csv_text`].
pub fn read_manifest(path: &Path) -> Result<Value, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let json = match text.strip_prefix("# manifest: ") {
        Some(rest) => rest.lines().next().unwrap_or("").to_string(),
        None => text,
    };
    let v: Value = serde_json::from_str(&json).map_err(|e| format!("no manifest in {}: {e}", path.display()))?;
    Ok(v.get("manifest").cloned().unwrap_or(v))
}

/// Rows of a CSV with a header, skipping `#` comment lines.
pub fn read_csv(path: &Path, columns: &[&str]) -> Result<Vec<Vec<f64>>, String> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let headers = r.headers().map_err(|e| e.to_string())?.clone();
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| {
            headers
                .iter()
                .position(|h| h == *c)
                .ok_or_else(|| format!("{} has no column `{c}`", path.display()))
        })
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let row = idx
            .iter()
            .map(|&i| {
                rec.get(i)
                    .unwrap_or("")
                    .parse::<f64>()
                    .map_err(|e| format!("{}: bad number `{}`: {e}", path.display(), rec.get(i).unwrap_or("")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let v = json!({"a": 0.1, "b": [1, -2.5e-300], "c": f64::NAN.to_string(), "d": 2.0});
        let s = to_json_string(&v);
        assert!(s.contains("\"a\": 1.0000000000000001e-1"));
        assert!(s.contains("-2.5000000000000000e-300"));
        assert!(s.contains("\"d\": 2.0000000000000000e0"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }
}
