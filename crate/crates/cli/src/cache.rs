//! Append-only JSON-lines result cache.
//!
//! Keys are isomorphism-invariant: the graph part is the lexicographically
//! minimal multiplicity matrix over vertex relabelings, so relabeled graphs
//! hit the same entry. Appends take an exclusive advisory lock so concurrent
//! invocations do not interleave; unparseable lines are skipped with a
//! warning, which also makes a torn trailing write harmless.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::os::unix::io::AsRawFd;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use frl_core::{Multigraph, QuadMethod, QuadratureConfig};
use serde_json::{json, Value};

use crate::errors::CliError;

/// Environment variable consulted when `--cache-path` is absent.
pub const CACHE_ENV: &str = "FRL_CACHE";

/// Resolves the cache location: flag first, then the environment. Caching is
/// off when neither is set or `--no-cache` is passed.
pub fn resolve_path(flag: Option<PathBuf>, no_cache: bool) -> Option<PathBuf> {
    if no_cache {
        return None;
    }
    flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

/// Cache key for a period computation: canonical graph, dimension and the
/// parts of the configuration that influence the result.
pub fn period_key(g: &Multigraph, dimension: u32, cfg: &QuadratureConfig) -> Option<String> {
    let canonical = g.canonical_form().ok()?;
    let triangle: Vec<String> = canonical.iter().map(u32::to_string).collect();
    let fingerprint = match cfg.method {
        QuadMethod::GaussTensor => format!("gauss:p={}", cfg.points_per_axis),
        QuadMethod::MonteCarlo => format!(
            "mc:s={}:seed={}:w={}",
            cfg.samples, cfg.rng_seed, cfg.workers
        ),
    };
    Some(format!(
        "g={}/{}|D={dimension}|{fingerprint}",
        g.n_vertices(),
        triangle.join(",")
    ))
}

/// Returns the most recent value stored under `key`, if any.
pub fn lookup(path: &Path, key: &str) -> Option<Value> {
    let file = File::open(path).ok()?;
    let mut found = None;
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.ok()?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Value>(&line) {
            Ok(entry) => {
                if entry.get("key").and_then(Value::as_str) == Some(key) {
                    found = entry.get("value").cloned();
                }
            }
            Err(_) => {
                eprintln!(
                    "warning: skipping unparseable cache line {} in {}",
                    lineno + 1,
                    path.display()
                );
            }
        }
    }
    found
}

/// Appends an entry under an exclusive advisory lock.
pub fn store(path: &Path, key: &str, value: &Value) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let created_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let entry = json!({ "key": key, "value": value, "created_at": created_at });
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    flock_exclusive(&file)?;
    writeln!(file, "{}", crate::output::render(&entry))?;
    file.flush()?;
    // lock drops with the descriptor
    Ok(())
}

fn flock_exclusive(file: &File) -> std::io::Result<()> {
    // SAFETY: flock on a valid owned descriptor
    let rc = unsafe { libc::flock(file.as_raw_fd(), libc::LOCK_EX) };
    if rc != 0 {
        return Err(std::io::Error::last_os_error());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fish() -> Multigraph {
        Multigraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn store_then_lookup_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let cfg = QuadratureConfig::gauss(64);
        let key = period_key(&fish(), 4, &cfg).unwrap();
        assert_eq!(lookup(&path, &key), None);
        store(&path, &key, &json!({ "value": 1.0 })).unwrap();
        let hit = lookup(&path, &key).unwrap();
        assert_eq!(hit["value"].as_f64(), Some(1.0));
    }

    #[test]
    fn last_entry_wins_and_bad_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        store(&path, "k", &json!(1)).unwrap();
        std::fs::OpenOptions::new()
            .append(true)
            .open(&path)
            .unwrap()
            .write_all(b"{ not json\n")
            .unwrap();
        store(&path, "k", &json!(2)).unwrap();
        assert_eq!(lookup(&path, "k"), Some(json!(2)));
    }

    #[test]
    fn keys_are_relabeling_invariant() {
        let wheel =
            Multigraph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]).unwrap();
        let relabeled =
            Multigraph::from_edges(4, &[(1, 2), (1, 3), (2, 3), (1, 0), (2, 0), (3, 0)]).unwrap();
        let cfg = QuadratureConfig::gauss(24);
        assert_eq!(period_key(&wheel, 4, &cfg), period_key(&relabeled, 4, &cfg));
        // different settings must not collide
        assert_ne!(
            period_key(&wheel, 4, &cfg),
            period_key(&wheel, 4, &QuadratureConfig::gauss(32))
        );
        assert_ne!(period_key(&wheel, 4, &cfg), period_key(&wheel, 6, &cfg));
    }
}
