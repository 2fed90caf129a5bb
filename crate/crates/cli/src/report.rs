use serde::{Deserialize, Serialize};
use serde_json::Value;

use slc_core::conventions::ConventionRecord;

use crate::config::{OutputFormat, RunConfig};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Mismatch,
    Aborted,
    ReportOnly,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::ReportOnly => 0,
            Status::Mismatch => 1,
            Status::Aborted => 3,
        }
    }

    /// Mismatch dominates abort, which dominates report-only.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Mismatch, _) | (_, Mismatch) => Mismatch,
            (Aborted, _) | (_, Aborted) => Aborted,
            (ReportOnly, _) | (_, ReportOnly) => ReportOnly,
            _ => Ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub conventions: ConventionRecord,
    pub convention_hash: String,
    pub status: Status,
    pub items: Value,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(config: RunConfig, status: Status, items: Value, flags: Vec<String>) -> Self {
        let conventions = ConventionRecord::current();
        Report {
            config,
            convention_hash: conventions.hash(),
            conventions,
            status,
            items,
            flags,
            timing_ms: None,
        }
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        let value = serde_json::to_value(self)?;
        match format {
            OutputFormat::Json => Ok(serde_json::to_string_pretty(&value)? + "\n"),
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["path", "value"])?;
                for (path, leaf) in flatten(&value) {
                    w.write_record([path, leaf])?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
            }
            OutputFormat::Text => {
                let mut out = String::new();
                for (path, leaf) in flatten(&value) {
                    out.push_str(&format!("{path} = {leaf}\n"));
                }
                Ok(out)
            }
        }
    }
}

/// Leaves of a JSON value with dotted paths, in document order.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn rec(v: &Value, path: String, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                    rec(x, p, out);
                }
            }
            Value::Array(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    rec(x, format!("{path}[{i}]"), out);
                }
                if xs.is_empty() {
                    out.push((path, "[]".into()));
                }
            }
            Value::String(s) => out.push((path, s.clone())),
            Value::Null => out.push((path, "null".into())),
            other => out.push((path, other.to_string())),
        }
    }
    let mut out = Vec::new();
    rec(v, String::new(), &mut out);
    out
}
