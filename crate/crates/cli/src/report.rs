//! Reports: one structure rendered either as text or as JSON.

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// Version tag of the JSON layout; bump on incompatible changes.
pub const SCHEMA: &str = "afcond-report/1";

/// Flags that affect results, echoed into every report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub max_steps: u64,
    pub precision: usize,
    pub arc_degree_bound: u32,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            max_steps: afcond::groebner::DEFAULT_MAX_STEPS,
            precision: afcond::poly::DEFAULT_PRECISION,
            arc_degree_bound: afcond::arcs::DEFAULT_DEGREE_BOUND,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Verdict,
    InputError,
    BudgetExceeded,
    Inconclusive,
    /// A corpus entry disagreed with its sidecar.
    Mismatch,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verdict => 0,
            Outcome::InputError => 1,
            Outcome::BudgetExceeded => 2,
            Outcome::Inconclusive => 3,
            Outcome::Mismatch => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_steps: u64,
    pub reduction_steps: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    /// File name as given on the command line.
    pub input: Option<String>,
    /// SHA-256 of the input bytes.
    pub input_digest: Option<String>,
    pub flags: Flags,
    pub outcome: Outcome,
    pub verdict: String,
    pub details: Map<String, Value>,
    pub budget: Budget,
    /// Wall-clock time, only with `--timing`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The text form: every JSON field appears as a `key: value` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(&v);
            out.push('\n');
        };
        line("schema", self.schema.to_string());
        line("command", self.command.clone());
        if let Some(i) = &self.input {
            line("input", i.clone());
        }
        if let Some(d) = &self.input_digest {
            line("input_digest", d.clone());
        }
        line(
            "flags",
            format!(
                "max_steps={} precision={} arc_degree_bound={}",
                self.flags.max_steps, self.flags.precision, self.flags.arc_degree_bound
            ),
        );
        line("outcome", enum_name(&self.outcome));
        line("verdict", self.verdict.clone());
        let mut rows = Vec::new();
        flatten("details", &Value::Object(self.details.clone()), &mut rows);
        for (k, v) in rows {
            line(&k, v);
        }
        line(
            "budget",
            format!(
                "reduction_steps={} max_steps={}",
                self.budget.reduction_steps, self.budget.max_steps
            ),
        );
        if let Some(t) = self.timing_ms {
            line("timing_ms", t.to_string());
        }
        out
    }
}

fn enum_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&format!("{prefix}.{k}"), x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| scalar(x).is_some()) => {
            let parts: Vec<String> = xs.iter().filter_map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", parts.join(", "))));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_lists_every_detail() {
        let mut details = Map::new();
        details.insert("lhs".into(), json!("(xi_y)"));
        details.insert("rows".into(), json!([{"arc": "x = t", "ok": true}]));
        let r = Report {
            schema: SCHEMA,
            command: "decompose".into(),
            input: Some("a.prob".into()),
            input_digest: Some(digest(b"abc")),
            flags: Flags::default(),
            outcome: Outcome::Verdict,
            verdict: "true".into(),
            details,
            budget: Budget {
                max_steps: 10,
                reduction_steps: 3,
            },
            timing_ms: None,
        };
        let text = r.to_text();
        assert!(text.contains("details.lhs: (xi_y)\n"));
        assert!(text.contains("details.rows[0].arc: x = t\n"));
        assert!(text.contains("outcome: verdict\n"));
        assert!(text.contains(
            "input_digest: ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        ));
        assert!(!r.to_json().contains("timing_ms"));
    }
}
