//! Verification reports: named checks with measured/expected values, an
//! aggregate pass flag, and JSON / Markdown renderings that carry the same
//! numeric content.

use serde::Serialize;
use serde_json::{json, Value};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Reported value without a pass/fail meaning; ignored by the
    /// aggregate flag.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub measured: Value,
    pub expected: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl CheckResult {
    /// |measured - expected| <= tolerance.
    pub fn numeric(name: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        let pass = (measured - expected).abs() <= tolerance;
        Self {
            name: name.into(),
            status: if pass {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured: json!(measured),
            expected: json!(expected),
            tolerance: Some(tolerance),
        }
    }

    /// measured <= bound.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            status: if measured <= bound {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured: json!(measured),
            expected: json!(format!("<= {bound}")),
            tolerance: Some(bound),
        }
    }

    /// measured >= bound.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            status: if measured >= bound {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured: json!(measured),
            expected: json!(format!(">= {bound}")),
            tolerance: Some(bound),
        }
    }

    /// Exact integer equality.
    pub fn count(name: impl Into<String>, measured: u64, expected: u64) -> Self {
        Self {
            name: name.into(),
            status: if measured == expected {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured: json!(measured),
            expected: json!(expected),
            tolerance: None,
        }
    }

    pub fn boolean(name: impl Into<String>, measured: bool) -> Self {
        Self {
            name: name.into(),
            status: if measured {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured: json!(measured),
            expected: json!(true),
            tolerance: None,
        }
    }

    /// A reported value with no pass/fail semantics.
    pub fn info(name: impl Into<String>, value: impl Serialize) -> Self {
        Self {
            name: name.into(),
            status: CheckStatus::Info,
            measured: serde_json::to_value(value).expect("info value serializes"),
            expected: json!("reported"),
            tolerance: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Echo of the run configuration, for reproducibility.
    pub config: Value,
    pub checks: Vec<CheckResult>,
    /// Command-specific payload (e.g. the sweep table).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>, config: Value) -> Self {
        Self {
            schema: REPORT_SCHEMA_VERSION,
            tool: "qhalf".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            checks: Vec::new(),
            data: None,
            pass: true,
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.pass &= check.passed();
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = CheckResult>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Markdown table carrying exactly the values of the JSON rendering.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# {} report ({} v{})\n\n",
            self.command, self.tool, self.version
        ));
        out.push_str(&format!("- schema: {}\n", self.schema));
        out.push_str(&format!("- config: `{}`\n", self.config));
        out.push_str(&format!("- pass: {}\n\n", self.pass));
        out.push_str("| check | status | measured | expected | tolerance |\n");
        out.push_str("|---|---|---|---|---|\n");
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "fail",
                CheckStatus::Info => "info",
            };
            let tolerance = c
                .tolerance
                .map(|t| json!(t).to_string())
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                c.name, status, c.measured, c.expected, tolerance
            ));
        }
        if let Some(data) = &self.data {
            out.push_str(&format!("\n```json\n{data:#}\n```\n"));
        }
        out
    }
}
