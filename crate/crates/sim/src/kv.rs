//! Plain-text `key = value` files. `#` starts a comment; blank lines are
//! ignored; later keys override earlier ones.

use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KvError {
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: String, line: usize },
    #[error("{path}:{line}: bad value for `{key}`: {msg}")]
    Value {
        path: String,
        line: usize,
        key: String,
        msg: String,
    },
    #[error("{path}:{line}: unknown key `{key}`")]
    UnknownKey {
        path: String,
        line: usize,
        key: String,
    },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, Default)]
pub struct KvFile {
    /// Where the text came from, for messages and relative paths.
    pub path: PathBuf,
    pub entries: Vec<Entry>,
}

impl KvFile {
    pub fn parse(text: &str, path: impl Into<PathBuf>) -> Result<Self, KvError> {
        let path = path.into();
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| KvError::Syntax {
                path: path.display().to_string(),
                line: i + 1,
            })?;
            let key = k.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(KvError::Syntax {
                    path: path.display().to_string(),
                    line: i + 1,
                });
            }
            entries.push(Entry {
                key,
                value: v.trim().to_string(),
                line: i + 1,
            });
        }
        Ok(Self { path, entries })
    }

    pub fn load(path: &Path) -> Result<Self, KvError> {
        let text = std::fs::read_to_string(path).map_err(|source| KvError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn value_error(&self, e: &Entry, msg: impl Into<String>) -> KvError {
        KvError::Value {
            path: self.path.display().to_string(),
            line: e.line,
            key: e.key.clone(),
            msg: msg.into(),
        }
    }

    pub fn unknown(&self, e: &Entry) -> KvError {
        KvError::UnknownKey {
            path: self.path.display().to_string(),
            line: e.line,
            key: e.key.clone(),
        }
    }

    /// Resolves `p` against the directory of this file.
    pub fn resolve(&self, p: &str) -> PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            return p.to_path_buf();
        }
        self.path
            .parent()
            .map_or_else(|| p.to_path_buf(), |d| d.join(p))
    }
}

pub fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| e.to_string())
}

pub fn parse_u64(s: &str) -> Result<u64, String> {
    s.parse::<u64>().map_err(|e| e.to_string())
}

pub fn parse_bool(s: &str) -> Result<bool, String> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("expected a boolean, got `{s}`")),
    }
}

/// Comma- or whitespace-separated list.
pub fn parse_list(s: &str) -> Vec<String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}
