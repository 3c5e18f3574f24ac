//! Campaign reports and their canonical JSON form.

use std::fmt::Write as _;
use std::path::Path;

use cstar_jensen::jensen_core::IdentityResidual;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::scenario::{Overrides, Scenario, SeedSource};
use crate::HarnessError;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelResults {
    pub label: String,
    /// Sorted by identity id.
    pub residuals: Vec<IdentityResidual>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub tool_version: String,
    pub scenario_digest: String,
    pub started: String,
    pub finished: String,
    pub seed: u64,
    pub seed_source: SeedSource,
    pub samples: usize,
    pub tol: f64,
    pub overrides: Overrides,
    /// Sorted by label.
    pub results: Vec<LabelResults>,
    pub overall_pass: bool,
}

pub(crate) fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl CampaignReport {
    pub(crate) fn new(s: &Scenario, started: String, results: Vec<LabelResults>) -> Self {
        let overall_pass = !results.is_empty()
            && results
                .iter()
                .all(|l| !l.residuals.is_empty() && l.residuals.iter().all(|r| r.pass));
        Self {
            tool_version: TOOL_VERSION.to_string(),
            scenario_digest: s.digest.clone(),
            started,
            finished: timestamp(),
            seed: s.seed,
            seed_source: s.seed_source,
            samples: s.samples,
            tol: s.tol,
            overrides: s.overrides.clone(),
            results,
            overall_pass,
        }
    }

    /// Every failing entry as `(label, residual)`.
    pub fn failures(&self) -> impl Iterator<Item = (&str, &IdentityResidual)> {
        self.results
            .iter()
            .flat_map(|l| l.residuals.iter().map(move |r| (l.label.as_str(), r)))
            .filter(|(_, r)| !r.pass)
    }

    /// Canonical JSON of the whole report.
    pub fn to_canonical_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("report serializes"))
    }

    /// Canonical JSON of the results alone, which excludes the timestamps.
    pub fn results_json(&self) -> String {
        canonical_json(&serde_json::to_value(&self.results).expect("results serialize"))
    }
}

/// Pretty JSON with keys sorted and every float written with 17
/// significant digits, so equal values always print identically.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => write!(out, "{u}").expect("write to string"),
            (None, Some(i), _) => write!(out, "{i}").expect("write to string"),
            (None, None, Some(f)) => write!(out, "{f:.16e}").expect("write to string"),
            _ => out.push_str(&n.to_string()),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[k.as_str()], depth + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

pub fn emit_report(r: &CampaignReport, path: &Path) -> Result<(), HarnessError> {
    std::fs::write(path, r.to_canonical_json()).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_report(path: &Path) -> Result<CampaignReport, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}
