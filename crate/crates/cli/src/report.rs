use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Found,
    NotFound,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> InputDigest {
        InputDigest {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub status: Status,
    pub findings: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Value>,
    /// Overrides the status-derived exit code: 2 for unreadable inputs, 3 when
    /// two oracles contradict each other.
    #[serde(skip)]
    pub exit: Option<u8>,
}

impl Report {
    pub fn new(command: &str, inputs: Vec<InputDigest>, status: Status, findings: Value) -> Report {
        Report {
            command: command.to_string(),
            inputs,
            status,
            findings,
            timings: None,
            exit: None,
        }
    }

    /// A failing report; `witnesses` must not be empty.
    pub fn fail(command: &str, inputs: Vec<InputDigest>, mut findings: Value, witnesses: Vec<Value>) -> Report {
        assert!(!witnesses.is_empty(), "a failing report carries a witness");
        if let Value::Object(map) = &mut findings {
            map.insert("witnesses".into(), Value::Array(witnesses));
        } else {
            findings = serde_json::json!({ "detail": findings, "witnesses": witnesses });
        }
        Report::new(command, inputs, Status::Fail, findings)
    }

    pub fn exit_code(&self) -> u8 {
        if let Some(code) = self.exit {
            return code;
        }
        match self.status {
            Status::Pass | Status::Found => 0,
            Status::Fail | Status::NotFound => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = serde_json::to_value(self.status).expect("status");
        let _ = writeln!(out, "{}: {}", self.command, status.as_str().unwrap_or_default());
        for input in &self.inputs {
            let _ = writeln!(out, "  input {} sha256:{}", input.path, input.sha256);
        }
        render(&mut out, &self.findings, 1);
        if let Some(t) = &self.timings {
            let _ = writeln!(out, "  timings:");
            render(&mut out, t, 2);
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.is_empty() => Some("[]".into()),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            Some(items.iter().filter_map(scalar).collect::<Vec<_>>().join(" "))
        }
        _ => None,
    }
}

fn render(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => render_map(out, map, depth),
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render(out, item, depth + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

fn render_map(out: &mut String, map: &Map<String, Value>, depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, v) in map {
        match scalar(v) {
            Some(s) => {
                let _ = writeln!(out, "{pad}{k}: {s}");
            }
            None => {
                let _ = writeln!(out, "{pad}{k}:");
                render(out, v, depth + 1);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn exit_codes() {
        let pass = Report::new("x", vec![], Status::Pass, json!({}));
        assert_eq!(pass.exit_code(), 0);
        let mut fail = Report::fail("x", vec![], json!({}), vec![json!({"atom": "s"})]);
        assert_eq!(fail.exit_code(), 1);
        fail.exit = Some(3);
        assert_eq!(fail.exit_code(), 3);
    }

    #[test]
    #[should_panic(expected = "witness")]
    fn fail_needs_a_witness() {
        Report::fail("x", vec![], json!({}), vec![]);
    }

    #[test]
    fn text_rendering() {
        let r = Report::new(
            "omega",
            vec![InputDigest::of("t.json", b"{}")],
            Status::Pass,
            json!({"median": "c", "rows": [["c", "l1", "l2", 1]], "norm": {"p": "1/1"}}),
        );
        let text = r.to_text();
        assert!(text.starts_with("omega: pass\n"));
        assert!(text.contains("sha256:44136fa355b3678a1146ad16f7e8649e94fb4fc21fe77e8310c060f61caaff8a"));
        assert!(text.contains("  median: c\n"));
        assert!(text.contains("    - c l1 l2 1\n"));
        assert!(text.contains("    p: 1/1\n"));
    }
}
