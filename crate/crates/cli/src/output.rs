//! Artifact writing. Every artifact carries the toolkit version and the
//! effective configuration that produced it.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SEWING_OUT_DIR";

/// The subcommand name plus its fully resolved flags.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig<T: Serialize> {
    pub subcommand: &'static str,
    #[serde(flatten)]
    pub args: T,
}

impl<T: Serialize> RunConfig<T> {
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }

    /// Leading comment lines for CSV artifacts.
    pub fn csv_comments(&self) -> Vec<String> {
        vec![format!("sewing {VERSION}"), format!("config: {}", self.to_value())]
    }
}

/// `{"version", "config", ...payload}` with the payload's fields inlined.
pub fn envelope<T: Serialize, P: Serialize>(config: &RunConfig<T>, payload: &P) -> Value {
    let mut out = json!({ "version": VERSION, "config": config.to_value() });
    match serde_json::to_value(payload).expect("payload serializes") {
        Value::Object(map) => {
            let obj = out.as_object_mut().expect("object");
            for (k, v) in map {
                obj.insert(k, v);
            }
        }
        other => {
            out["result"] = other;
        }
    }
    out
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).with_context(|| format!("cannot create {}", parent.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

/// Explicit directory, else the environment default, else `fallback`.
pub fn out_dir(explicit: Option<&Path>, fallback: Option<&str>) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| fallback.map(PathBuf::from))
}
