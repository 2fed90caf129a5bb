use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::report::Report;
use crate::CliError;

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    report: Report,
}

/// Cache key: SHA-256 of the config echo and the convention hash.
pub fn key(config: &RunConfig, convention_hash: &str) -> Result<String, CliError> {
    let text = serde_json::to_string(&(config, convention_hash))?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored report, only when its key, config and conventions all match.
    pub fn load(&self, key: &str, config: &RunConfig, convention_hash: &str, log: &mut Vec<String>) -> Option<Report> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        match serde_json::from_str::<Entry>(&text) {
            Ok(e) if e.key == key && e.report.config == *config && e.report.convention_hash == convention_hash => {
                log.push(format!("cache hit: {key}"));
                Some(e.report)
            }
            _ => {
                log.push(format!("cache entry {key} rejected: contents do not match the key"));
                None
            }
        }
    }

    pub fn store(&self, key: &str, report: &Report) -> Result<(), CliError> {
        let mut report = report.clone();
        report.timing_ms = None;
        let text = serde_json::to_string_pretty(&Entry {
            key: key.to_string(),
            report,
        })?;
        let tmp = self.dir.join(format!("{key}.json.tmp"));
        fs::write(&tmp, text).map_err(|e| CliError::Io(e.to_string()))?;
        fs::rename(&tmp, self.path(key)).map_err(|e| CliError::Io(e.to_string()))
    }
}
