//! File formats.
//!
//! Structure files are JSON objects tagged by `"kind"`:
//!
//! ```text
//! {"kind":"qmetric","size":n,"labels":[..]?,"entries":[[v,..],..]}
//! {"kind":"wpm","size":n,"entries":[[v,..],..]}
//! {"kind":"weight","values":[r,..]}
//! {"kind":"meetsl","size":n,"meet":[[i,..],..]}
//! {"kind":"valuation","flavour":"meet-coval","values":[r,..],"congruence":[[i,..],..]?,"meet":[[i,..],..]?}
//! {"kind":"digraph","nv":n,"edges":[[u,v],..]}
//! ```
//!
//! A value `v` is a JSON integer, a string holding a reduced fraction
//! (`"3/4"`), or `"inf"`; `r` is the same without `"inf"`. Quasi-metric
//! entries must be non-negative.
//!
//! String files hold one string per line after an optional `alphabet: ...`
//! header. Seed files hold one element per line: `{0, 5}` for a finite set of
//! integers, or `;`-separated generators such as `0:1,2:3; 1:1` for a
//! subgroup (`0` alone is the trivial subgroup). Blank lines and lines
//! starting with `//` are skipped in both.

use std::fmt::Write as _;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::order::Partition;
use crate::semilattice::valuation::Flavour;
use crate::value::{format_rational, parse_rational, DistVal, Rational, ValueParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("at {path}: {msg}")]
    Shape { path: String, msg: String },
    #[error("at {path}: {err}")]
    Value { path: String, err: ValueParseError },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
}

fn shape(path: &str, msg: impl Into<String>) -> FormatError {
    FormatError::Shape { path: path.into(), msg: msg.into() }
}

/// A parsed but not yet validated structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Qmetric { entries: Vec<Vec<DistVal>>, labels: Option<Vec<String>> },
    Wpm { entries: Vec<Vec<DistVal>> },
    Weight { values: Vec<Rational> },
    MeetSl { meet: Vec<Vec<usize>> },
    Valuation {
        flavour: Flavour,
        values: Vec<Rational>,
        congruence: Option<Vec<Vec<usize>>>,
        meet: Option<Vec<Vec<usize>>>,
    },
    Digraph { nv: usize, edges: Vec<(usize, usize)> },
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Qmetric { .. } => "qmetric",
            Structure::Wpm { .. } => "wpm",
            Structure::Weight { .. } => "weight",
            Structure::MeetSl { .. } => "meetsl",
            Structure::Valuation { .. } => "valuation",
            Structure::Digraph { .. } => "digraph",
        }
    }
}

struct Obj<'a> {
    map: &'a Map<String, Value>,
}

impl<'a> Obj<'a> {
    fn get(&self, key: &str) -> Result<&'a Value, FormatError> {
        self.map.get(key).ok_or_else(|| shape("$", format!("missing field `{key}`")))
    }

    fn usize(&self, key: &str) -> Result<usize, FormatError> {
        as_usize(self.get(key)?, &format!("$.{key}"))
    }
}

fn as_usize(v: &Value, path: &str) -> Result<usize, FormatError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| shape(path, "expected a non-negative integer"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| shape(path, "expected an array"))
}

fn parse_value(v: &Value, path: &str, allow_inf: bool) -> Result<DistVal, FormatError> {
    let err = |e| FormatError::Value { path: path.into(), err: e };
    match v {
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                parse_rational(&n.to_string()).map(DistVal::Finite).map_err(err)
            } else {
                Err(err(ValueParseError::Malformed(n.to_string())))
            }
        }
        Value::String(s) if s == "inf" => {
            if allow_inf {
                Ok(DistVal::Infinity)
            } else {
                Err(shape(path, "`inf` is not allowed here"))
            }
        }
        Value::String(s) => parse_rational(s).map(DistVal::Finite).map_err(err),
        _ => Err(shape(path, "expected an integer or a string")),
    }
}

fn parse_rationals(v: &Value, path: &str) -> Result<Vec<Rational>, FormatError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let p = format!("{path}[{i}]");
            parse_value(x, &p, false).map(|d| d.finite().cloned().expect("finite"))
        })
        .collect()
}

fn parse_matrix(v: &Value, path: &str, size: usize, nonneg: bool) -> Result<Vec<Vec<DistVal>>, FormatError> {
    let rows = as_array(v, path)?;
    if rows.len() != size {
        return Err(shape(path, format!("expected {size} rows, found {}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let rp = format!("{path}[{i}]");
            let cells = as_array(r, &rp)?;
            if cells.len() != size {
                return Err(shape(&rp, format!("expected {size} entries, found {}", cells.len())));
            }
            cells
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let cp = format!("{rp}[{j}]");
                    let d = parse_value(c, &cp, true)?;
                    if nonneg && d.is_negative() {
                        return Err(shape(&cp, "distances cannot be negative"));
                    }
                    Ok(d)
                })
                .collect()
        })
        .collect()
}

fn parse_index_matrix(v: &Value, path: &str) -> Result<Vec<Vec<usize>>, FormatError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let rp = format!("{path}[{i}]");
            as_array(r, &rp)?
                .iter()
                .enumerate()
                .map(|(j, c)| as_usize(c, &format!("{rp}[{j}]")))
                .collect()
        })
        .collect()
}

/// Parses a structure file. Only syntax and shape are checked here.
pub fn parse_structure(text: &str) -> Result<Structure, FormatError> {
    let root: Value = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let map = root.as_object().ok_or_else(|| shape("$", "expected an object"))?;
    let o = Obj { map };
    let kind = o.get("kind")?.as_str().ok_or_else(|| shape("$.kind", "expected a string"))?;
    match kind {
        "qmetric" => {
            let size = o.usize("size")?;
            let entries = parse_matrix(o.get("entries")?, "$.entries", size, true)?;
            let labels = match map.get("labels") {
                None => None,
                Some(v) => {
                    let arr = as_array(v, "$.labels")?;
                    if arr.len() != size {
                        return Err(shape("$.labels", format!("expected {size} labels")));
                    }
                    let ls = arr
                        .iter()
                        .enumerate()
                        .map(|(i, l)| {
                            l.as_str()
                                .map(str::to_string)
                                .ok_or_else(|| shape(&format!("$.labels[{i}]"), "expected a string"))
                        })
                        .collect::<Result<_, _>>()?;
                    Some(ls)
                }
            };
            Ok(Structure::Qmetric { entries, labels })
        }
        "wpm" => {
            let size = o.usize("size")?;
            Ok(Structure::Wpm { entries: parse_matrix(o.get("entries")?, "$.entries", size, false)? })
        }
        "weight" => Ok(Structure::Weight { values: parse_rationals(o.get("values")?, "$.values")? }),
        "meetsl" => {
            let size = o.usize("size")?;
            let meet = parse_index_matrix(o.get("meet")?, "$.meet")?;
            if meet.len() != size || meet.iter().any(|r| r.len() != size) {
                return Err(shape("$.meet", format!("expected a {size}×{size} table")));
            }
            Ok(Structure::MeetSl { meet })
        }
        "valuation" => {
            let fl = o.get("flavour")?.as_str().ok_or_else(|| shape("$.flavour", "expected a string"))?;
            let flavour = fl.parse().map_err(|e: String| shape("$.flavour", e))?;
            let values = parse_rationals(o.get("values")?, "$.values")?;
            let congruence = map.get("congruence").map(|v| parse_index_matrix(v, "$.congruence")).transpose()?;
            let meet = map.get("meet").map(|v| parse_index_matrix(v, "$.meet")).transpose()?;
            Ok(Structure::Valuation { flavour, values, congruence, meet })
        }
        "digraph" => {
            let nv = o.usize("nv")?;
            let edges = parse_index_matrix(o.get("edges")?, "$.edges")?
                .into_iter()
                .enumerate()
                .map(|(i, e)| match e[..] {
                    [u, v] => Ok((u, v)),
                    _ => Err(shape(&format!("$.edges[{i}]"), "expected a pair")),
                })
                .collect::<Result<_, _>>()?;
            Ok(Structure::Digraph { nv, edges })
        }
        other => Err(shape("$.kind", format!("unknown kind `{other}`"))),
    }
}

fn value_json(d: &DistVal) -> String {
    match d {
        DistVal::Infinity => "\"inf\"".into(),
        DistVal::Finite(r) if r.is_integer() => format_rational(r),
        DistVal::Finite(r) => format!("\"{}\"", format_rational(r)),
    }
}

fn write_rows<T>(out: &mut String, key: &str, rows: &[Vec<T>], cell: impl Fn(&T) -> String, last: bool) {
    let _ = writeln!(out, "  \"{key}\": [");
    for (i, r) in rows.iter().enumerate() {
        let cells: Vec<String> = r.iter().map(&cell).collect();
        let sep = if i + 1 < rows.len() { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", cells.join(", "));
    }
    let _ = writeln!(out, "  ]{}", if last { "" } else { "," });
}

fn write_list(out: &mut String, key: &str, items: &[String], last: bool) {
    let _ = writeln!(out, "  \"{key}\": [{}]{}", items.join(", "), if last { "" } else { "," });
}

/// Canonical text of a structure. Parsing the output and writing it again
/// gives the same bytes.
pub fn write_structure(s: &Structure) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"kind\": \"{}\",", s.kind());
    match s {
        Structure::Qmetric { entries, labels } => {
            let _ = writeln!(out, "  \"size\": {},", entries.len());
            if let Some(ls) = labels {
                let quoted: Vec<String> = ls.iter().map(|l| Value::String(l.clone()).to_string()).collect();
                write_list(&mut out, "labels", &quoted, false);
            }
            write_rows(&mut out, "entries", entries, value_json, true);
        }
        Structure::Wpm { entries } => {
            let _ = writeln!(out, "  \"size\": {},", entries.len());
            write_rows(&mut out, "entries", entries, value_json, true);
        }
        Structure::Weight { values } => {
            let items: Vec<String> = values.iter().map(|v| value_json(&DistVal::Finite(v.clone()))).collect();
            write_list(&mut out, "values", &items, true);
        }
        Structure::MeetSl { meet } => {
            let _ = writeln!(out, "  \"size\": {},", meet.len());
            write_rows(&mut out, "meet", meet, usize::to_string, true);
        }
        Structure::Valuation { flavour, values, congruence, meet } => {
            let _ = writeln!(out, "  \"flavour\": \"{flavour}\",");
            let items: Vec<String> = values.iter().map(|v| value_json(&DistVal::Finite(v.clone()))).collect();
            write_list(&mut out, "values", &items, congruence.is_none() && meet.is_none());
            if let Some(c) = congruence {
                write_rows(&mut out, "congruence", c, usize::to_string, meet.is_none());
            }
            if let Some(m) = meet {
                write_rows(&mut out, "meet", m, usize::to_string, true);
            }
        }
        Structure::Digraph { nv, edges } => {
            let _ = writeln!(out, "  \"nv\": {nv},");
            let items: Vec<String> = edges.iter().map(|(u, v)| format!("[{u}, {v}]")).collect();
            write_list(&mut out, "edges", &items, true);
        }
    }
    out.push_str("}\n");
    out
}

/// Congruence blocks as a partition of `0..n`.
pub fn partition_from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Partition, FormatError> {
    Partition::new(n, blocks).map_err(|e| shape("$.congruence", e.to_string()))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with("//"))
}

/// Alphabet (if declared) and strings of a string file.
pub fn parse_strings(text: &str) -> Result<(Option<String>, Vec<String>), FormatError> {
    let mut alphabet = None;
    let mut strings = Vec::new();
    for (n, l) in content_lines(text) {
        if let Some(rest) = l.strip_prefix("alphabet:") {
            if alphabet.is_some() || !strings.is_empty() {
                return Err(FormatError::Line { line: n, msg: "the alphabet header must come first".into() });
            }
            alphabet = Some(rest.chars().filter(|c| !c.is_whitespace() && *c != ',').collect());
        } else {
            strings.push(l.to_string());
        }
    }
    Ok((alphabet, strings))
}

/// Finite sets of integers, one `{a, b, ..}` per line.
pub fn parse_set_seeds(text: &str) -> Result<Vec<Vec<i64>>, FormatError> {
    content_lines(text)
        .map(|(n, l)| {
            let bad = |msg: &str| FormatError::Line { line: n, msg: msg.into() };
            let inner = l
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| bad("expected `{...}`"))?;
            if inner.trim().is_empty() {
                return Ok(Vec::new());
            }
            inner
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad(&format!("bad integer `{}`", t.trim()))))
                .collect()
        })
        .collect()
}

/// Generator lists, one subgroup per line. Each generator is a sparse
/// vector `index:value,...`.
pub fn parse_subgroup_seeds(text: &str) -> Result<Vec<Vec<Vec<u32>>>, FormatError> {
    content_lines(text)
        .map(|(n, l)| {
            let bad = |msg: String| FormatError::Line { line: n, msg };
            if l == "0" {
                return Ok(Vec::new());
            }
            l.split(';')
                .map(|g| {
                    let mut v: Vec<u32> = Vec::new();
                    for term in g.split(',').map(str::trim) {
                        let (i, x) = term
                            .split_once(':')
                            .ok_or_else(|| bad(format!("expected `index:value`, got `{term}`")))?;
                        let i: usize = i.trim().parse().map_err(|_| bad(format!("bad index `{i}`")))?;
                        let x: u32 = x.trim().parse().map_err(|_| bad(format!("bad value `{x}`")))?;
                        if i > 4096 {
                            return Err(bad(format!("index {i} is too large")));
                        }
                        if v.len() <= i {
                            v.resize(i + 1, 0);
                        }
                        v[i] = x;
                    }
                    Ok(v)
                })
                .collect()
        })
        .collect()
}
