use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::record::CrystalRecord;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// The registry shipped with the crate.
pub const BUNDLED: &str = include_str!("../../data/crystals.toml");

#[derive(Serialize, Deserialize)]
struct RegistryFile {
    schema_version: u32,
    #[serde(default)]
    crystal: Vec<CrystalRecord>,
}

/// Immutable, ordered collection of validated crystal records.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Registry {
    records: Vec<CrystalRecord>,
}

fn parse_error(record: &str, field: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        record: record.to_string(),
        field: field.to_string(),
        message: message.into(),
    }
}

impl Registry {
    pub fn bundled() -> Self {
        Self::from_toml_str(BUNDLED).expect("bundled registry is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Self::default());
        }
        let mut root: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| parse_error("<file>", "<syntax>", e.message()))?;
        let version = root
            .remove("schema_version")
            .ok_or_else(|| parse_error("<file>", "schema_version", "missing"))?;
        match version.as_integer() {
            Some(v) if v == SCHEMA_VERSION as i64 => {}
            _ => {
                return Err(parse_error(
                    "<file>",
                    "schema_version",
                    format!("expected {SCHEMA_VERSION}, found {version}"),
                ))
            }
        }
        let crystals = match root.remove("crystal") {
            None => Vec::new(),
            Some(toml::Value::Array(items)) => items,
            Some(_) => return Err(parse_error("<file>", "crystal", "expected an array of tables")),
        };
        if let Some(key) = root.keys().next() {
            return Err(parse_error("<file>", key, "unknown top-level field"));
        }

        let mut records = Vec::with_capacity(crystals.len());
        let mut seen = HashSet::new();
        for (i, value) in crystals.into_iter().enumerate() {
            let name = value
                .get("id")
                .and_then(|v| v.as_str())
                .map(str::to_string)
                .unwrap_or_else(|| format!("crystal[{i}]"));
            let record: CrystalRecord = serde_path_to_error::deserialize(value).map_err(|e| {
                let path = e.path().to_string();
                parse_error(&name, &path, e.into_inner().message())
            })?;
            if !seen.insert(record.id.clone()) {
                return Err(Error::DuplicateId(record.id));
            }
            record.validate()?;
            records.push(record);
        }
        Ok(Self { records })
    }

    pub fn to_toml_string(&self) -> String {
        let file = RegistryFile {
            schema_version: SCHEMA_VERSION,
            crystal: self.records.clone(),
        };
        toml::to_string(&file).expect("registry serializes")
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.records.iter().map(|r| r.id.as_str()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CrystalRecord> {
        self.records.iter()
    }

    pub fn get(&self, id: &str) -> Result<&CrystalRecord> {
        self.records
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::UnknownCrystal {
                id: id.to_string(),
                available: self.ids().join(", "),
            })
    }
}
