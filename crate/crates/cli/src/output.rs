//! File output: fixed-precision CSV, JSON sidecars and run manifests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Six significant digits, positional notation where it stays readable.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    // Round first so the exponent reflects carries such as 9999995 -> 1.00000e7.
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    let exp = rounded.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{rounded:.5e}");
    }
    let decimals = (5 - exp).max(0) as usize;
    format!("{rounded:.decimals$}")
}

pub fn opt6(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_default()
}

/// Quote a CSV field when it carries a separator, quote or newline.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut c = Self::default();
        c.row(header.iter().map(|s| s.to_string()));
        c
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = String>) {
        let cells: Vec<String> = cells.into_iter().map(|c| field(&c)).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command_line: Vec<String>,
    pub registry: String,
    pub registry_sha256: String,
    pub parameters: Value,
    pub outputs: Vec<String>,
}

/// Collects the files a command writes and finishes with a manifest naming them.
pub struct Run {
    dir: PathBuf,
    pub command_line: Vec<String>,
    pub registry: String,
    pub registry_sha256: String,
    outputs: Vec<String>,
}

impl Run {
    pub fn new(dir: &Path, command_line: Vec<String>, registry: String, registry_sha256: String) -> Self {
        Self {
            dir: dir.to_path_buf(),
            command_line,
            registry,
            registry_sha256,
            outputs: Vec::new(),
        }
    }

    pub fn write(&mut self, name: &str, contents: &str) -> std::io::Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    pub fn write_json(&mut self, name: &str, value: &Value) -> std::io::Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("json value serializes");
        text.push('\n');
        self.write(name, &text)
    }

    /// Write `<stem>.manifest.json` and return its path.
    pub fn finish(self, stem: &str, parameters: Value) -> std::io::Result<PathBuf> {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command_line: self.command_line,
            registry: self.registry,
            registry_sha256: self.registry_sha256,
            parameters,
            outputs: self.outputs,
        };
        fs::create_dir_all(&self.dir)?;
        let path = self.dir.join(format!("{stem}.manifest.json"));
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}
