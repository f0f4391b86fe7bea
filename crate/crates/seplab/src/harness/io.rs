//! Persistence: a single pretty JSON document per instance or report,
//! JSON Lines for record streams, and replay comparison that ignores the
//! informational wall-time fields.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

/// Write one value as a pretty-printed JSON document with a trailing
/// newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Write a record stream as JSON Lines: one compact document per line.
pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut text = String::new();
    for item in items {
        text.push_str(&serde_json::to_string(item)?);
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    fs::read_to_string(path)?
        .lines()
        .filter(|line| !line.trim().is_empty())
        .map(|line| Ok(serde_json::from_str(line)?))
        .collect()
}

/// Zero every `wall_time_s` field, recursively. Timings are informational
/// and excluded from replay comparisons.
pub fn normalize_wall_time(value: &mut Value) {
    match value {
        Value::Object(map) => {
            for (key, v) in map.iter_mut() {
                if key == "wall_time_s" {
                    *v = Value::from(0.0);
                } else {
                    normalize_wall_time(v);
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                normalize_wall_time(v);
            }
        }
        _ => {}
    }
}

/// Byte-level equality after wall-time normalization: the replay test for
/// any serialized artifact.
pub fn replay_equal(a: &Value, b: &Value) -> bool {
    let mut a = a.clone();
    let mut b = b.clone();
    normalize_wall_time(&mut a);
    normalize_wall_time(&mut b);
    serde_json::to_string(&a).ok() == serde_json::to_string(&b).ok()
}
