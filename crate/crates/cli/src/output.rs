use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::Failure;

pub const SCHEMA_VERSION: u64 = 1;

/// Pretty JSON with `schemaVersion` and `command` in front of the body's
/// own fields.
pub fn json<T: Serialize>(out: &mut dyn Write, command: &str, body: &T) -> Result<(), Failure> {
    let mut map = Map::new();
    map.insert("schemaVersion".into(), SCHEMA_VERSION.into());
    map.insert("command".into(), command.into());
    match serde_json::to_value(body)? {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
    serde_json::to_writer_pretty(&mut *out, &Value::Object(map))?;
    writeln!(out)?;
    Ok(())
}

pub fn csv_row<S: AsRef<str>>(out: &mut dyn Write, cells: &[S]) -> Result<(), Failure> {
    let line: Vec<String> = cells.iter().map(|c| escape(c.as_ref())).collect();
    writeln!(out, "{}", line.join(","))?;
    Ok(())
}

fn escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shortest round-trip float text, written the way the JSON output writes it.
pub fn float(x: f64) -> String {
    serde_json::Value::from(x).to_string()
}
