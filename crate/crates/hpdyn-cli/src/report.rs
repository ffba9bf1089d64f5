//! Canonical report serialization: sorted keys, every float printed with 17
//! significant digits (round-trip exact), and a content hash of the resolved
//! run configuration. Identical configs produce byte-identical output.

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Formats one JSON value canonically. Keys are already sorted: serde_json
/// maps are ordered by key. Floats use `{:.16e}` (17 significant digits).
pub fn write_canonical(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let f = n.as_f64().expect("JSON numbers are i64, u64 or f64");
                assert!(f.is_finite(), "non-finite numbers must be encoded as strings");
                out.push_str(&format!("{f:.16e}"));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("keys always serialize"));
                out.push(':');
                write_canonical(v, out);
            }
            out.push('}');
        }
    }
}

pub fn canonical_string(value: &Value) -> String {
    let mut out = String::new();
    write_canonical(value, &mut out);
    out.push('\n');
    out
}

/// SHA-256 of the canonical form, hex-encoded.
pub fn config_hash(config: &Value) -> String {
    let mut text = String::new();
    write_canonical(config, &mut text);
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Renders a `(n, value)` series as CSV. Values must be finite; infinite
/// verdicts are spelled out as the marker `inf` by the caller.
pub fn series_csv(columns: &[(&str, &[String])], n0: usize) -> String {
    let mut out = String::from("n");
    for (name, _) in columns {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    let rows = columns.iter().map(|(_, v)| v.len()).min().unwrap_or(0);
    for r in 0..rows {
        out.push_str(&(n0 + r).to_string());
        for (_, v) in columns {
            out.push(',');
            out.push_str(&v[r]);
        }
        out.push('\n');
    }
    out
}

/// Formats one numeric cell; non-finite values become the explicit marker.
pub fn csv_cell(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "inf".to_string()
    }
}
