//! Text encodings for systems, linear maps and spectrum points.
//!
//! Documents are JSON. Rationals are strings `"p/q"` or `"p"`; emitted
//! documents put keys in a fixed order and rationals in lowest terms, so the
//! encoding of a value is byte-deterministic.
//!
//! ```text
//! {
//!   "n": 4,
//!   "breakpoints": [
//!     {"q": "5", "value": ["1", "1", "1", "2"]},
//!     ...
//!   ],
//!   "self_similar_ratio": "2",
//!   "class": "generalized"
//! }
//! ```

use crate::error::{Error, Result};
use crate::path::PlPath;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::spectrum::{LinearMap, SelfSimilarSystem, SpectrumMode, SpectrumPoint};
use crate::validate::SystemClass;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serializer};
use std::fmt::Write as _;

pub(crate) fn ser_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum System {
    Path(PlPath),
    SelfSimilar(SelfSimilarSystem),
}

impl System {
    /// The stored breakpoints: the whole path, or one period.
    pub fn path(&self) -> &PlPath {
        match self {
            System::Path(p) => p,
            System::SelfSimilar(s) => s.base(),
        }
    }
}

impl From<PlPath> for System {
    fn from(p: PlPath) -> Self {
        System::Path(p)
    }
}

impl From<SelfSimilarSystem> for System {
    fn from(s: SelfSimilarSystem) -> Self {
        System::SelfSimilar(s)
    }
}

struct Rat(Rational);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Rat).map_err(de::Error::custom)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BreakpointDoc {
    q: Rat,
    value: Vec<Rat>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    n: usize,
    breakpoints: Vec<BreakpointDoc>,
    #[serde(default)]
    self_similar_ratio: Option<Rat>,
    #[serde(default)]
    class: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    m: usize,
    n: usize,
    rows: Vec<Vec<Rat>>,
}

/// 1-based line and column of occurrence `nth` (0-based) of `"key"`.
fn locate_nth(text: &str, key: &str, nth: usize) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    match text.match_indices(&needle).nth(nth).map(|(i, _)| i) {
        Some(offset) => {
            let before = &text[..offset];
            let line = before.matches('\n').count() + 1;
            let col = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            (line, col)
        }
        None => (1, 1),
    }
}

fn semantic_error(text: &str, field: &str, message: impl Into<String>) -> Error {
    let (line, column) = locate_nth(text, field, 0);
    Error::Parse {
        line,
        column,
        field: Some(field.to_string()),
        message: message.into(),
    }
}

fn deserialize_doc<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse {
            line: inner.line(),
            column: inner.column(),
            field: (path != "." && path != "?").then_some(path),
            message: strip_position(&inner.to_string()),
        }
    })?;
    de.end().map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        field: None,
        message: strip_position(&e.to_string()),
    })?;
    Ok(value)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn parse_class(s: &str) -> Result<SystemClass> {
    match s.trim() {
        "exact" => Ok(SystemClass::ExactNSystem),
        "generalized" => Ok(SystemClass::GeneralizedNSystem),
        other => match other.strip_prefix("rigid:") {
            Some(mesh) => SystemClass::rigid(parse_rational(mesh)?),
            None => Err(Error::BadParameters(format!(
                "unknown system class {other:?}; expected exact, generalized or rigid:<mesh>"
            ))),
        },
    }
}

pub fn parse_system(text: &str) -> Result<System> {
    let doc: SystemDoc = deserialize_doc(text)?;
    let points: Vec<(Rational, Vec<Rational>)> = doc
        .breakpoints
        .into_iter()
        .map(|bp| (bp.q.0, bp.value.into_iter().map(|r| r.0).collect()))
        .collect();
    if let Some(i) = (1..points.len()).find(|&i| points[i].0 <= points[i - 1].0) {
        let (line, column) = locate_nth(text, "q", i);
        return Err(Error::Parse {
            line,
            column,
            field: Some(format!("breakpoints[{i}].q")),
            message: format!(
                "q = {} is not greater than the previous q = {}",
                points[i].0,
                points[i - 1].0
            ),
        });
    }
    if points.len() < 2 {
        return Err(semantic_error(text, "breakpoints", "at least two breakpoints are required"));
    }
    if let Some((i, _)) = points.iter().enumerate().find(|(_, (_, v))| v.len() != doc.n) {
        return Err(semantic_error(
            text,
            "breakpoints",
            format!("breakpoint {} has {} coordinates but n = {}", i + 1, points[i].1.len(), doc.n),
        ));
    }
    let path = PlPath::from_points(points).map_err(|e| semantic_error(text, "breakpoints", e.to_string()))?;
    let class = doc
        .class
        .as_deref()
        .map(parse_class)
        .transpose()
        .map_err(|e| semantic_error(text, "class", e.to_string()))?;
    match (doc.self_similar_ratio, class) {
        (None, None) => Ok(System::Path(path)),
        (None, Some(_)) => Err(semantic_error(
            text,
            "class",
            "class is only stored for self-similar systems",
        )),
        (Some(ratio), class) => {
            let class = class.unwrap_or(SystemClass::GeneralizedNSystem);
            SelfSimilarSystem::new(path, ratio.0, class)
                .map(System::SelfSimilar)
                .map_err(|e| semantic_error(text, "self_similar_ratio", e.to_string()))
        }
    }
}

fn quoted(x: &Rational) -> String {
    serde_json::to_string(&format_rational(x)).expect("string encodes")
}

fn quoted_vec(v: &[Rational]) -> String {
    let items: Vec<String> = v.iter().map(quoted).collect();
    format!("[{}]", items.join(", "))
}

fn emit_breakpoints(out: &mut String, path: &PlPath) {
    out.push_str("  \"breakpoints\": [\n");
    let last = path.breakpoints().len() - 1;
    for (i, (q, v)) in path.breakpoints().iter().zip(path.values()).enumerate() {
        let sep = if i == last { "" } else { "," };
        writeln!(out, "    {{\"q\": {}, \"value\": {}}}{sep}", quoted(q), quoted_vec(v)).unwrap();
    }
    out.push_str("  ]");
}

pub fn emit_system(sys: &System) -> String {
    let path = sys.path();
    let mut out = String::from("{\n");
    writeln!(out, "  \"n\": {},", path.dim()).unwrap();
    emit_breakpoints(&mut out, path);
    if let System::SelfSimilar(s) = sys {
        write!(
            out,
            ",\n  \"self_similar_ratio\": {},\n  \"class\": {}",
            quoted(s.ratio()),
            serde_json::to_string(&s.class().to_string()).unwrap()
        )
        .unwrap();
    }
    out.push_str("\n}\n");
    out
}

pub fn parse_linear_map(text: &str) -> Result<LinearMap> {
    let doc: MapDoc = deserialize_doc(text)?;
    if doc.rows.len() != doc.m {
        return Err(semantic_error(
            text,
            "rows",
            format!("{} rows but m = {}", doc.rows.len(), doc.m),
        ));
    }
    if let Some((i, r)) = doc.rows.iter().enumerate().find(|(_, r)| r.len() != doc.n) {
        return Err(semantic_error(
            text,
            "rows",
            format!("row {} has {} coefficients but n = {}", i + 1, r.len(), doc.n),
        ));
    }
    let rows = doc
        .rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.0).collect())
        .collect();
    LinearMap::new(rows).map_err(|e| semantic_error(text, "rows", e.to_string()))
}

pub fn emit_linear_map(t: &LinearMap) -> String {
    let mut out = String::from("{\n");
    writeln!(out, "  \"m\": {},", t.m()).unwrap();
    writeln!(out, "  \"n\": {},", t.n()).unwrap();
    out.push_str("  \"rows\": [\n");
    for (i, row) in t.rows().iter().enumerate() {
        let sep = if i + 1 == t.m() { "" } else { "," };
        writeln!(out, "    {}{sep}", quoted_vec(row)).unwrap();
    }
    out.push_str("  ]\n}\n");
    out
}

/// One-line encoding of a spectrum point.
pub fn emit_spectrum_point(p: &SpectrumPoint) -> String {
    match &p.mode {
        SpectrumMode::Exact => format!("{{\"values\": {}, \"mode\": \"exact\"}}", quoted_vec(&p.values)),
        SpectrumMode::Estimate { lo, hi } => format!(
            "{{\"values\": {}, \"mode\": \"estimate\", \"window\": [{}, {}]}}",
            quoted_vec(&p.values),
            quoted(lo),
            quoted(hi)
        ),
    }
}
