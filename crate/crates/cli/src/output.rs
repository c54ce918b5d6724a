//! CSV rows and `key=value` metadata sidecars.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};

/// Formats a real with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=6).contains(&mag) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

pub fn unix_time() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Writes `key=value` lines next to `output`.
pub fn write_sidecar(output: &Path, entries: &[(&str, String)]) -> Result<()> {
    let path = sidecar_path(output);
    let mut f = File::create(&path).with_context(|| format!("writing {}", path.display()))?;
    for (k, v) in entries {
        writeln!(f, "{k}={}", v.replace('\n', " "))?;
    }
    Ok(())
}

/// Common metadata for every output file.
pub fn base_meta(command: &str) -> Vec<(&'static str, String)> {
    vec![
        ("tool", "ringlll".into()),
        ("version", env!("CARGO_PKG_VERSION").into()),
        ("command", command.into()),
        ("rng", ringlll::dynamics::RNG_NAME.into()),
        ("created_unix", unix_time().to_string()),
    ]
}

/// CSV writer appending to `path`; writes the header only for a new or empty file.
pub fn open_csv(path: &Path, header: &[&str], append: bool) -> Result<csv::Writer<File>> {
    let existing = append && path.metadata().map(|m| m.len() > 0).unwrap_or(false);
    let file = if existing {
        OpenOptions::new().append(true).open(path)
    } else {
        File::create(path)
    }
    .with_context(|| format!("opening {}", path.display()))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if !existing {
        w.write_record(header)?;
        w.flush()?;
    }
    Ok(w)
}

/// Row keys already present in `path`, built from the named columns.
pub fn existing_keys(path: &Path, key_cols: &[&str]) -> Result<Vec<String>> {
    let Ok(file) = File::open(path) else {
        return Ok(Vec::new());
    };
    if BufReader::new(&file).lines().next().is_none() {
        return Ok(Vec::new());
    }
    let mut r = csv::ReaderBuilder::new().flexible(true).from_path(path)?;
    let headers = r.headers()?.clone();
    let idx: Vec<usize> = key_cols
        .iter()
        .map(|c| {
            headers
                .iter()
                .position(|h| h == *c)
                .with_context(|| format!("{} has no column {c:?}", path.display()))
        })
        .collect::<Result<_>>()?;
    let mut keys = Vec::new();
    for rec in r.records() {
        // a partially written last line is dropped and recomputed
        let Ok(rec) = rec else { continue };
        if rec.len() != headers.len() {
            continue;
        }
        keys.push(idx.iter().map(|&i| &rec[i]).collect::<Vec<_>>().join("|"));
    }
    Ok(keys)
}
