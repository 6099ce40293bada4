//! Line-oriented on-disk form of the memo cache.
//!
//! ```text
//! icvp-cache v1
//! A3: 1,0,2,1
//! G2: 1,0,1
//! ```
//!
//! Keys are canonical group strings; values are dense coefficient lists of `P`.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ic_core::MemoCache;
use crate::polyring::IntPoly;
use crate::root_data::GroupType;

pub const CACHE_HEADER: &str = "icvp-cache v1";

pub fn format_entries(entries: &[(GroupType, IntPoly)]) -> String {
    let mut sorted: Vec<&(GroupType, IntPoly)> = entries.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = String::from(CACHE_HEADER);
    out.push('\n');
    for (key, value) in sorted {
        let coeffs: Vec<String> = value.to_dense().iter().map(BigInt::to_string).collect();
        out.push_str(&format!("{key}: {}\n", coeffs.join(",")));
    }
    out
}

pub fn parse_entries(text: &str, origin: &str) -> Result<Vec<(GroupType, IntPoly)>> {
    let bad = |line: usize, message: String| Error::Cache {
        path: origin.to_string(),
        message: format!("line {line}: {message}"),
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == CACHE_HEADER => {}
        other => return Err(bad(1, format!("expected header '{CACHE_HEADER}', found {other:?}"))),
    }
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let (key, values) = line.split_once(':').ok_or_else(|| bad(lineno, "missing ':'".into()))?;
        let group: GroupType = key.trim().parse().map_err(|e: Error| bad(lineno, e.to_string()))?;
        let coeffs = values
            .trim()
            .split(',')
            .map(|c| c.trim().parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(lineno, e.to_string()))?;
        out.push((group, IntPoly::from_coeffs(coeffs)));
    }
    Ok(out)
}

pub fn load(cache: &MemoCache, path: &Path) -> Result<usize> {
    if !path.exists() {
        return Ok(0);
    }
    let text = fs::read_to_string(path)?;
    let entries = parse_entries(&text, &path.display().to_string())?;
    let n = entries.len();
    cache.preload(entries);
    Ok(n)
}

/// Writes the cache through a sibling temporary file and a rename.
pub fn save(cache: &MemoCache, path: &Path) -> Result<()> {
    let body = format_entries(&cache.snapshot());
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
