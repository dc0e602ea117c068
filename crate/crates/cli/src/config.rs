//! Key=value defaults file. Lines look like `kernel=ramp`; `#` starts a
//! comment. Command-line flags always win over file values.

use mmexp_core::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

const KNOWN_KEYS: &[&str] = &[
    "kernel",
    "function",
    "interval",
    "format",
    "out",
    "n",
    "n-list",
    "grid-points",
    "phi",
    "lambda",
    "cells",
    "order",
];

#[derive(Clone, Debug, Default)]
pub struct FileConfig {
    map: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<FileConfig> {
        match path {
            None => Ok(FileConfig::default()),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                FileConfig::parse(&text)
            }
        }
    }

    pub fn parse(text: &str) -> Result<FileConfig> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::invalid(format!(
                    "config line {}: expected key=value, got '{line}'",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::invalid(format!(
                    "config line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            map.insert(key.to_string(), value.trim().to_string());
        }
        Ok(FileConfig { map })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }
}
