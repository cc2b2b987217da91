//! The report printed by every command, in text or JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

use secant_core::MembershipVerdict;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Memberships {
    pub sigma1: bool,
    pub sigma2: bool,
    pub sigma3: bool,
    #[serde(rename = "D")]
    pub d: bool,
}

impl From<&MembershipVerdict> for Memberships {
    fn from(v: &MembershipVerdict) -> Self {
        Memberships {
            sigma1: v.in_sigma1,
            sigma2: v.in_sigma2,
            sigma3: v.in_sigma3,
            d: v.in_d,
        }
    }
}

/// Fixed top-level schema. Keys are always present; absent values are `null`.
/// `details` carries command-specific values (matrix shape, table cells, ...).
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: Option<String>,
    pub parameters: Map<String, Value>,
    pub ranks: BTreeMap<u32, usize>,
    pub memberships: Option<Memberships>,
    pub orbit_class: Option<String>,
    pub conormal_dim: Option<usize>,
    pub expected_codim: Option<usize>,
    pub verdict: Option<String>,
    pub caveats: Vec<String>,
    pub details: Map<String, Value>,
    pub elapsed_ms: Option<u64>,
    /// Extra text lines printed after the standard fields; their numbers are
    /// mirrored in `details`.
    #[serde(skip)]
    pub text_lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            input: None,
            parameters: Map::new(),
            ranks: BTreeMap::new(),
            memberships: None,
            orbit_class: None,
            conormal_dim: None,
            expected_codim: None,
            verdict: None,
            caveats: Vec::new(),
            details: Map::new(),
            elapsed_ms: None,
            text_lines: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    pub fn caveat(&mut self, c: Option<&str>) {
        if let Some(c) = c {
            if !self.caveats.iter().any(|x| x == c) {
                self.caveats.push(c.to_string());
            }
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report is serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("command: {}", self.command));
        if let Some(input) = &self.input {
            line(format!("form: {input}"));
        }
        if !self.parameters.is_empty() {
            let p: Vec<String> = self
                .parameters
                .iter()
                .map(|(k, v)| format!("{k}={}", plain(v)))
                .collect();
            line(format!("parameters: {}", p.join(" ")));
        }
        if !self.ranks.is_empty() {
            let r: Vec<String> = self.ranks.iter().map(|(k, r)| format!("k={k}:{r}")).collect();
            line(format!("flattening ranks: {}", r.join(" ")));
        }
        if let Some(m) = &self.memberships {
            line(format!(
                "memberships: sigma1={} sigma2={} sigma3={} D={}",
                m.sigma1, m.sigma2, m.sigma3, m.d
            ));
        }
        if let Some(c) = &self.orbit_class {
            line(format!("orbit class: {c}"));
        }
        if let Some(c) = self.conormal_dim {
            line(format!("conormal dim: {c}"));
        }
        if let Some(c) = self.expected_codim {
            line(format!("expected codim: {c}"));
        }
        for l in &self.text_lines {
            line(l.clone());
        }
        if let Some(v) = &self.verdict {
            line(format!("verdict: {v}"));
        }
        for c in &self.caveats {
            line(format!("caveat: {c}"));
        }
        if let Some(ms) = self.elapsed_ms {
            line(format!("elapsed: {ms} ms"));
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Renders a sequence of reports: one block per report in text mode, a single
/// object or an array in JSON mode.
pub fn render(reports: &[Report], json: bool, as_array: bool) -> String {
    if json {
        let value = if as_array {
            Value::Array(reports.iter().map(Report::to_json).collect())
        } else {
            reports.first().map(Report::to_json).unwrap_or(Value::Null)
        };
        let mut s = serde_json::to_string_pretty(&value).expect("json");
        s.push('\n');
        s
    } else {
        let mut s = String::new();
        for (i, r) in reports.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            let _ = write!(s, "{}", r.to_text());
        }
        s
    }
}
