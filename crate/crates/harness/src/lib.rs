//! Scenario-driven verification campaigns over the `cstar-jensen` checkers.
//!
//! A scenario file fixes an algebra, a coefficient, module ranks, an
//! additive pair, a list of labelled mappings and the identity ids to check.
//! [`run_suite`] evaluates every check for every mapping and returns a
//! [`CampaignReport`] whose canonical JSON depends only on the scenario
//! bytes and the command-line overrides, timestamps aside.

pub mod campaign;
pub mod probes;
pub mod report;
pub mod scenario;

pub use campaign::{run_decomposition, run_suite};
pub use report::{canonical_json, emit_report, load_report, CampaignReport, LabelResults};
pub use scenario::{load_scenario, parse_scenario, Overrides, Scenario, SEED_ENV};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid scenario: {0}")]
    Validation(String),
}

/// Printed after usage and scenario errors.
pub const SCHEMA_HELP: &str = r#"Scenario schema (JSON):
  {
    "algebra":     [n1, n2, ...],                 block sizes of A
    "coefficient": {"scalar": x | "diagonal": [x, ...] | "element": {...},
                    "strict_order": bool}         x is a number or "p/q"
    "spaces":      {"F": int, "E": int, "G": int} ranks; pair F -> E, mappings E -> G
    "pair":        {"builder": "interleave" | "morphism_shift" | "coefficient_shift"
                               | "explicit", "id"?: str, ...}   optional
    "sampler":     {"mode": "disjoint_support" | "pair_image" | "explicit", ...}  optional
    "mappings":    [{"label": str, "map": {"kind": ..., ...}}, ...]   at least one
    "checks":      [identity id, ...]             at least one, see list-checks
    "samples":     int,  "seed": int,  "tol": float   optional
  }"#;
