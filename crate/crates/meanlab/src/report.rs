//! Report structures shared by the chain verifiers, the scanner, and the
//! CLI serializers. JSON field order follows struct declaration order, so
//! serialized reports are byte-stable for a fixed configuration and seed.

use serde::Serialize;

/// One directed comparison inside a chain, with the smallest margin
/// `lhs − rhs` observed across all checked samples.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub lhs: String,
    pub rhs: String,
    pub min_margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainViolation {
    pub pair: (f64, f64),
    pub lhs: String,
    pub rhs: String,
    pub lhs_value: f64,
    pub rhs_value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub chain_name: String,
    pub comparisons: Vec<Comparison>,
    pub violations: Vec<ChainViolation>,
    pub samples_checked: u64,
    pub seed: Option<u64>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportTolerances {
    pub abs: f64,
    pub rel: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportMeta {
    pub version: String,
    pub seed: Option<u64>,
    pub tolerances: ReportTolerances,
}

/// Top-level JSON report envelope: `{meta: {...}, results: [...]}`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub meta: ReportMeta,
    pub results: Vec<serde_json::Value>,
}

impl Report {
    pub fn new(seed: Option<u64>, abs: f64, rel: f64) -> Self {
        Report {
            meta: ReportMeta {
                version: env!("CARGO_PKG_VERSION").to_string(),
                seed,
                tolerances: ReportTolerances { abs, rel },
            },
            results: Vec::new(),
        }
    }

    pub fn push<T: Serialize>(&mut self, value: &T) {
        self.results
            .push(serde_json::to_value(value).expect("report entries serialize"));
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Formats a float with 17 significant digits, enough to round-trip f64.
pub fn fmt17(v: f64) -> String {
    format!("{:.16e}", v)
}

/// One CSV line; the caller supplies already-formatted fields.
pub fn csv_row(fields: &[String]) -> String {
    fields.join(",")
}
