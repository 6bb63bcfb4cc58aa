use std::fmt::Write as _;

use qmet_core::value::format_rational;
use qmet_core::{DistVal, Rational};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Checks and derived structures of one command run. Human text is built
/// alongside the JSON so that both list things in the same order.
#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub verdicts: Vec<Verdict>,
    pub derived: Map<String, Value>,
    #[serde(skip)]
    text: String,
}

pub fn value_json(d: &DistVal) -> Value {
    match d {
        DistVal::Infinity => json!("inf"),
        DistVal::Finite(r) => rational_json(r),
    }
}

pub fn rational_json(r: &Rational) -> Value {
    let s = format_rational(r);
    match s.parse::<i64>() {
        Ok(i) => json!(i),
        Err(_) => json!(s),
    }
}

fn render(d: &DistVal) -> String {
    match d {
        DistVal::Infinity => "inf".into(),
        DistVal::Finite(r) => format_rational(r),
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), verdicts: Vec::new(), derived: Map::new(), text: String::new() }
    }

    pub fn check(&mut self, name: &str, outcome: Result<(), String>) -> bool {
        let pass = outcome.is_ok();
        let witness = outcome.err();
        match &witness {
            None => {
                let _ = writeln!(self.text, "{name}: yes");
            }
            Some(w) => {
                let _ = writeln!(self.text, "{name}: no ({w})");
            }
        }
        self.verdicts.push(Verdict { check: name.into(), pass, witness });
        pass
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn matrix(&mut self, name: &str, m: &[Vec<DistVal>]) {
        let cells: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(render).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        let _ = writeln!(self.text, "{name}:");
        for r in &cells {
            let line: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            let _ = writeln!(self.text, "  {}", line.join(" "));
        }
        let v = m.iter().map(|r| Value::Array(r.iter().map(value_json).collect())).collect();
        self.derived.insert(name.into(), Value::Array(v));
    }

    pub fn vector(&mut self, name: &str, v: &[Rational]) {
        let s: Vec<String> = v.iter().map(format_rational).collect();
        let _ = writeln!(self.text, "{name}: [{}]", s.join(", "));
        self.derived.insert(name.into(), Value::Array(v.iter().map(rational_json).collect()));
    }

    pub fn blocks(&mut self, name: &str, blocks: &[Vec<usize>]) {
        let s: Vec<String> = blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        let _ = writeln!(self.text, "{name}: {}", s.join(" "));
        self.derived.insert(name.into(), json!(blocks));
    }

    pub fn pairs(&mut self, name: &str, pairs: &[(usize, usize)]) {
        let s: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}<{b}")).collect();
        let _ = writeln!(self.text, "{name}: {}", if s.is_empty() { "none".into() } else { s.join(" ") });
        self.derived.insert(name.into(), json!(pairs.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>()));
    }

    pub fn field(&mut self, name: &str, text: String, value: Value) {
        let _ = writeln!(self.text, "{name}: {text}");
        self.derived.insert(name.into(), value);
    }

    /// Free text in the human output only.
    pub fn note(&mut self, line: &str) {
        let _ = writeln!(self.text, "{line}");
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string_pretty(self).expect("report serialises") + "\n"
        } else {
            self.text.clone()
        }
    }
}
