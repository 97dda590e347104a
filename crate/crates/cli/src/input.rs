use std::io::Read;

use serde::de::DeserializeOwned;
use stirling::StirlingPerm;

use crate::Failure;

/// Reads `-` from stdin, `@path` (or an existing path) from a file, and
/// otherwise takes the argument itself.
pub fn text(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    if let Some(path) = arg.strip_prefix('@') {
        return Ok(std::fs::read_to_string(path)?);
    }
    let t = arg.trim_start();
    if !t.starts_with('{') && !t.starts_with('[') && std::path::Path::new(arg).is_file() {
        return Ok(std::fs::read_to_string(arg)?);
    }
    Ok(arg.to_string())
}

pub fn json<T: DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    Ok(serde_json::from_str(&text(arg)?)?)
}

/// Compact digits, a comma/space separated list, or a JSON array.
pub fn perm(arg: &str) -> Result<StirlingPerm, Failure> {
    let s = text(arg)?;
    let s = s.trim();
    if s.starts_with('[') {
        return Ok(serde_json::from_str(s)?);
    }
    if s.contains(',') || s.contains(char::is_whitespace) {
        let word = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| Failure::Invalid(format!("`{t}` is not a label"))))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(StirlingPerm::from_word(word)?);
    }
    Ok(StirlingPerm::parse_compact(s)?)
}
