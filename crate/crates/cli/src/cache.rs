//! Append-only record cache, one JSON-lines file per `(p, k)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::record::{ResultRecord, SCHEMA_VERSION};

#[derive(Debug, Serialize, Deserialize)]
struct Line {
    key: String,
    records: Vec<ResultRecord>,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// `PGS_CACHE_DIR`, else the user cache directory.
    pub fn from_env() -> Option<Self> {
        let dir = match std::env::var_os("PGS_CACHE_DIR") {
            Some(d) if !d.is_empty() => PathBuf::from(d),
            _ => match std::env::var_os("XDG_CACHE_HOME") {
                Some(d) if !d.is_empty() => PathBuf::from(d).join("pgonal"),
                _ => PathBuf::from(std::env::var_os("HOME")?).join(".cache").join("pgonal"),
            },
        };
        Some(Cache { dir })
    }

    pub fn key(command: &str, p: u32, k: usize, exponents: &[u32], flags: &str) -> String {
        let exps: Vec<String> = exponents.iter().map(|r| r.to_string()).collect();
        format!("v{SCHEMA_VERSION}|{command}|p={p}|k={k}|exp={}|{flags}", exps.join(","))
    }

    fn file(&self, p: u32, k: usize) -> PathBuf {
        self.dir.join(format!("p{p}_k{k}.jsonl"))
    }

    pub fn get(&self, p: u32, k: usize, key: &str) -> Option<Vec<ResultRecord>> {
        let text = fs::read_to_string(self.file(p, k)).ok()?;
        text.lines()
            .filter_map(|l| serde_json::from_str::<Line>(l).ok())
            .find(|l| l.key == key)
            .map(|l| l.records)
    }

    /// Appends one line by rewriting the file through a temporary sibling
    /// and renaming it into place.
    pub fn put(&self, p: u32, k: usize, key: &str, records: &[ResultRecord]) -> Result<()> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let path = self.file(p, k);
        let mut body = fs::read(&path).unwrap_or_default();
        if !body.is_empty() && !body.ends_with(b"\n") {
            body.push(b'\n');
        }
        serde_json::to_writer(&mut body, &Line { key: key.to_string(), records: records.to_vec() })?;
        body.push(b'\n');
        write_atomic(&path, &body)
    }
}

fn write_atomic(path: &Path, body: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!("jsonl.tmp.{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(body)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}
