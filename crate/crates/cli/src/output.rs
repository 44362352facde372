use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::commands::Outcome;
use crate::error::{CliError, CliResult};

const DECIMALS: usize = 6;

#[derive(Serialize)]
struct Summary<'a> {
    command: &'a str,
    arguments: &'a BTreeMap<String, String>,
    inputs_sha256: String,
    tolerances: &'a BTreeMap<String, f64>,
    passed: bool,
    metrics: &'a BTreeMap<String, Value>,
    artifacts: Vec<String>,
}

/// SHA-256 over every input file (name, length, bytes) and the canonical arguments.
pub fn inputs_digest(inputs: &[(String, Vec<u8>)], arguments: &BTreeMap<String, String>) -> String {
    let mut h = Sha256::new();
    for (name, bytes) in inputs {
        h.update(name.as_bytes());
        h.update([0]);
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    for (k, v) in arguments {
        h.update(k.as_bytes());
        h.update([0]);
        h.update(v.as_bytes());
        h.update([0]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Fixed-precision text for the terminal.
pub fn render(outcome: &Outcome) -> String {
    let mut s = String::new();
    let titled = outcome.tables.len() > 1;
    for (name, table) in &outcome.tables {
        if titled {
            s.push_str(&format!("[{name}]\n"));
        }
        s.push_str(&table.render(DECIMALS));
        if titled {
            s.push('\n');
        }
    }
    s.push_str(if outcome.passed { "status: pass\n" } else { "status: fail\n" });
    s
}

/// Writes to a sibling temporary file and renames it over `path`.
fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("artifact");
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    result.map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::io(path, e)
    })
}

/// Full-precision tables plus `summary.json`.
pub fn write_bundle(
    dir: &Path,
    outcome: &Outcome,
    arguments: &BTreeMap<String, String>,
    inputs: &[(String, Vec<u8>)],
) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut artifacts = Vec::new();
    for (name, table) in &outcome.tables {
        let file = format!("{name}.tsv");
        write_atomic(&dir.join(&file), table.to_tsv().as_bytes())?;
        artifacts.push(file);
    }
    let summary = Summary {
        command: outcome.command,
        arguments,
        inputs_sha256: inputs_digest(inputs, arguments),
        tolerances: &outcome.tolerances,
        passed: outcome.passed,
        metrics: &outcome.metrics,
        artifacts,
    };
    let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    json.push('\n');
    write_atomic(&dir.join("summary.json"), json.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_depends_on_every_input() {
        let args = BTreeMap::from([("seed".to_string(), "1".to_string())]);
        let a = inputs_digest(&[("scenario".into(), b"n = 3".to_vec())], &args);
        let b = inputs_digest(&[("scenario".into(), b"n = 4".to_vec())], &args);
        let c = inputs_digest(&[("scenario".into(), b"n = 3".to_vec())], &BTreeMap::new());
        assert_eq!(a.len(), 64);
        assert!(a != b && a != c);
    }
}
