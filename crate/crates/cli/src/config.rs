use kakeya_core::{BoundReport, LabError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: &str = "1";

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub seed: u64,
    pub resolution: Resolution,
    pub outputs: Vec<String>,
    pub schema_version: String,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub grid: usize,
}

impl RunConfig {
    pub fn new(subcommand: &str, args: &impl Serialize, seed: u64, grid: usize) -> Self {
        let params = match serde_json::to_value(args) {
            Ok(serde_json::Value::Object(m)) => m.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        RunConfig {
            subcommand: subcommand.to_string(),
            params,
            seed,
            resolution: Resolution { grid },
            outputs: Vec::new(),
            schema_version: SCHEMA_VERSION.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn output(&mut self, p: &Path) {
        self.outputs.push(p.display().to_string());
    }
}

/// A report file: the run configuration and the reports it produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub run_config: RunConfig,
    pub reports: Vec<BoundReport>,
}

pub fn to_json(v: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn write_text(out: Option<&PathBuf>, text: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| LabError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text)?;
            so.flush()?;
            Ok(())
        }
    }
}

/// Sidecar path holding the run configuration of a CSV output.
pub fn sidecar(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".run.json");
    PathBuf::from(s)
}
