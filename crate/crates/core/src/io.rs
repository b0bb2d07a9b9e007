//! The `esnkit/1` JSON file format.
//!
//! Every file is one object with `kind` and `version` keys. Nested structures
//! carry `kind` but no `version`. Emission is canonical: sorted keys, two-space
//! indentation, rows of tables on their own lines, LF endings and a trailing
//! newline. Only strings, booleans, null and non-negative integers appear.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::affine::RawAction;
use crate::category::RawCategory;
use crate::groupoid::RawGroupoid;
use crate::semigroup::RawSemigroup;

pub const FORMAT_VERSION: &str = "esnkit/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("schema error at {path}: {reason}")]
    Schema { path: String, reason: String },
}

fn schema(path: &str, reason: impl Into<String>) -> IoError {
    IoError::Schema {
        path: path.to_string(),
        reason: reason.into(),
    }
}

/// A group acting on a poset with a distinguished subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTriple {
    pub group: RawSemigroup,
    pub points: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    /// `action[g][x]` is `g·x`.
    pub action: Vec<Vec<usize>>,
    pub y: Vec<usize>,
}

/// A map between two structures of the same kind. Affine morphisms also carry
/// the map on categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawMorphism {
    pub source: Box<Structure>,
    pub target: Box<Structure>,
    pub map: Vec<usize>,
    pub category_map: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    InverseSemigroup(RawSemigroup),
    OrderedGroupoid(RawGroupoid),
    Category(RawCategory),
    McAlisterTriple(RawTriple),
    AffineSystem(RawAction),
    Morphism(RawMorphism),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::InverseSemigroup(_) => "inverse_semigroup",
            Structure::OrderedGroupoid(_) => "ordered_groupoid",
            Structure::Category(_) => "category",
            Structure::McAlisterTriple(_) => "mcalister_triple",
            Structure::AffineSystem(_) => "affine_system",
            Structure::Morphism(_) => "morphism",
        }
    }

    /// Labels for witness indices: elements, arrows, or groupoid elements.
    pub fn labels(&self) -> Vec<String> {
        match self {
            Structure::InverseSemigroup(s) => s.elements.clone(),
            Structure::OrderedGroupoid(g) => g.elements.clone(),
            Structure::Category(c) => c.arrows.clone(),
            Structure::McAlisterTriple(t) => t.points.clone(),
            Structure::AffineSystem(a) => a.groupoid.elements.clone(),
            Structure::Morphism(m) => m.source.labels(),
        }
    }
}

/// Parses a file's bytes.
pub fn parse_bytes(bytes: &[u8]) -> Result<Structure, IoError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count();
        IoError::Parse {
            line,
            reason: "invalid UTF-8".into(),
        }
    })?;
    parse(text)
}

pub fn parse(text: &str) -> Result<Structure, IoError> {
    let value: Value = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        reason: e.to_string(),
    })?;
    let mut obj = Obj::new(&value, "$")?;
    match obj.str("version")? {
        v if v == FORMAT_VERSION => {}
        v => return Err(schema("$.version", format!("unsupported version {v:?}"))),
    }
    let s = structure(&mut obj)?;
    obj.finish()?;
    Ok(s)
}

fn nested(value: &Value, path: &str) -> Result<Structure, IoError> {
    let mut obj = Obj::new(value, path)?;
    let s = structure(&mut obj)?;
    obj.finish()?;
    Ok(s)
}

fn structure(obj: &mut Obj<'_>) -> Result<Structure, IoError> {
    let kind = obj.str("kind")?;
    Ok(match kind.as_str() {
        "inverse_semigroup" => Structure::InverseSemigroup(semigroup_body(obj)?),
        "ordered_groupoid" => Structure::OrderedGroupoid(groupoid_body(obj)?),
        "category" => Structure::Category(category_body(obj)?),
        "mcalister_triple" => Structure::McAlisterTriple(triple_body(obj)?),
        "affine_system" => Structure::AffineSystem(affine_body(obj)?),
        "morphism" => Structure::Morphism(morphism_body(obj)?),
        other => return Err(schema(&obj.at("kind"), format!("unknown kind {other:?}"))),
    })
}

fn semigroup_body(obj: &mut Obj<'_>) -> Result<RawSemigroup, IoError> {
    let elements = obj.names("elements")?;
    let n = elements.len();
    let table = obj.matrix("table", n, n, |v, p| index(v, p, n))?;
    let zero = obj.opt("zero").map(|(v, p)| index(v, &p, n)).transpose()?;
    Ok(RawSemigroup { elements, table, zero })
}

fn groupoid_body(obj: &mut Obj<'_>) -> Result<RawGroupoid, IoError> {
    let elements = obj.names("elements")?;
    let n = elements.len();
    let dom = obj.indices("dom", Some(n), n)?;
    let cod = obj.indices("cod", Some(n), n)?;
    let inv = obj.indices("inv", Some(n), n)?;
    let comp = obj.matrix("comp", n, n, |v, p| opt_index(v, p, n))?;
    let leq = match obj.opt("leq") {
        Some((v, p)) => Some(matrix_at(v, &p, n, n, boolean)?),
        None => None,
    };
    Ok(RawGroupoid {
        elements,
        dom,
        cod,
        inv,
        comp,
        leq,
    })
}

fn category_body(obj: &mut Obj<'_>) -> Result<RawCategory, IoError> {
    let arrows = obj.names("arrows")?;
    let n = arrows.len();
    let dom = obj.indices("dom", Some(n), n)?;
    let cod = obj.indices("cod", Some(n), n)?;
    let comp = obj.matrix("comp", n, n, |v, p| opt_index(v, p, n))?;
    Ok(RawCategory { arrows, dom, cod, comp })
}

fn triple_body(obj: &mut Obj<'_>) -> Result<RawTriple, IoError> {
    let (gv, gp) = obj.req("group")?;
    let group = match nested(gv, &gp)? {
        Structure::InverseSemigroup(s) => s,
        other => return Err(schema(&gp, format!("expected inverse_semigroup, found {}", other.kind()))),
    };
    let (pv, pp) = obj.req("poset")?;
    let mut poset = Obj::new(pv, &pp)?;
    let points = poset.names("elements")?;
    let k = points.len();
    let leq = poset.matrix("leq", k, k, boolean)?;
    poset.finish()?;
    let action = obj.matrix("action", group.elements.len(), k, |v, p| index(v, p, k))?;
    let y = obj.indices("Y", None, k)?;
    Ok(RawTriple {
        group,
        points,
        leq,
        action,
        y,
    })
}

fn affine_body(obj: &mut Obj<'_>) -> Result<RawAction, IoError> {
    let (cv, cp) = obj.req("category")?;
    let category = match nested(cv, &cp)? {
        Structure::Category(c) => c,
        other => return Err(schema(&cp, format!("expected category, found {}", other.kind()))),
    };
    let (gv, gp) = obj.req("groupoid")?;
    let groupoid = match nested(gv, &gp)? {
        Structure::OrderedGroupoid(g) => g,
        other => return Err(schema(&gp, format!("expected ordered_groupoid, found {}", other.kind()))),
    };
    let (m, n) = (category.arrows.len(), groupoid.elements.len());
    let pi = obj.indices("pi", Some(n), m)?;
    let action = obj.matrix("action", m, n, |v, p| opt_index(v, p, n))?;
    Ok(RawAction {
        category,
        groupoid,
        pi,
        action,
    })
}

fn carrier_len(s: &Structure) -> usize {
    match s {
        Structure::InverseSemigroup(x) => x.elements.len(),
        Structure::OrderedGroupoid(x) => x.elements.len(),
        Structure::Category(x) => x.arrows.len(),
        Structure::AffineSystem(x) => x.groupoid.elements.len(),
        Structure::McAlisterTriple(x) => x.points.len(),
        Structure::Morphism(_) => 0,
    }
}

fn morphism_body(obj: &mut Obj<'_>) -> Result<RawMorphism, IoError> {
    let (sv, sp) = obj.req("source")?;
    let source = nested(sv, &sp)?;
    let (tv, tp) = obj.req("target")?;
    let target = nested(tv, &tp)?;
    if matches!(source, Structure::Morphism(_) | Structure::McAlisterTriple(_)) {
        return Err(schema(&sp, format!("{} cannot be a morphism source", source.kind())));
    }
    if source.kind() != target.kind() {
        return Err(schema(&tp, format!("expected {}, found {}", source.kind(), target.kind())));
    }
    let map = obj.indices("map", Some(carrier_len(&source)), carrier_len(&target))?;
    let category_map = match (&source, &target) {
        (Structure::AffineSystem(a), Structure::AffineSystem(b)) => {
            Some(obj.indices("category_map", Some(a.category.arrows.len()), b.category.arrows.len())?)
        }
        _ => None,
    };
    Ok(RawMorphism {
        source: Box::new(source),
        target: Box::new(target),
        map,
        category_map,
    })
}

/// An object being consumed key by key; `finish` rejects leftovers.
struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
    used: BTreeSet<&'static str>,
}

impl<'a> Obj<'a> {
    fn new(value: &'a Value, path: &str) -> Result<Obj<'a>, IoError> {
        match value {
            Value::Object(map) => Ok(Obj {
                map,
                path: path.to_string(),
                used: BTreeSet::new(),
            }),
            _ => Err(schema(path, "expected an object")),
        }
    }

    fn at(&self, key: &str) -> String {
        format!("{}.{key}", self.path)
    }

    fn opt(&mut self, key: &'static str) -> Option<(&'a Value, String)> {
        self.used.insert(key);
        self.map.get(key).map(|v| (v, self.at(key)))
    }

    fn req(&mut self, key: &'static str) -> Result<(&'a Value, String), IoError> {
        self.opt(key).ok_or_else(|| schema(&self.at(key), "missing field"))
    }

    fn str(&mut self, key: &'static str) -> Result<String, IoError> {
        let (v, p) = self.req(key)?;
        v.as_str().map(str::to_string).ok_or_else(|| schema(&p, "expected a string"))
    }

    fn names(&mut self, key: &'static str) -> Result<Vec<String>, IoError> {
        let (v, p) = self.req(key)?;
        let items = array(v, &p)?;
        let mut seen = BTreeSet::new();
        items
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let name = x.as_str().ok_or_else(|| schema(&format!("{p}[{i}]"), "expected a string"))?;
                if !seen.insert(name) {
                    return Err(schema(&format!("{p}[{i}]"), format!("duplicate name {name:?}")));
                }
                Ok(name.to_string())
            })
            .collect()
    }

    fn indices(&mut self, key: &'static str, len: Option<usize>, bound: usize) -> Result<Vec<usize>, IoError> {
        let (v, p) = self.req(key)?;
        let items = array(v, &p)?;
        if let Some(len) = len {
            if items.len() != len {
                return Err(schema(&p, format!("expected {len} entries, found {}", items.len())));
            }
        }
        items.iter().enumerate().map(|(i, x)| index(x, &format!("{p}[{i}]"), bound)).collect()
    }

    fn matrix<T>(
        &mut self,
        key: &'static str,
        rows: usize,
        cols: usize,
        cell: impl Fn(&Value, &str) -> Result<T, IoError>,
    ) -> Result<Vec<Vec<T>>, IoError> {
        let (v, p) = self.req(key)?;
        matrix_at(v, &p, rows, cols, cell)
    }

    fn finish(self) -> Result<(), IoError> {
        match self.map.keys().find(|k| !self.used.contains(k.as_str())) {
            Some(k) => Err(schema(&self.at(k), "unknown field")),
            None => Ok(()),
        }
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn matrix_at<T>(
    v: &Value,
    path: &str,
    rows: usize,
    cols: usize,
    cell: impl Fn(&Value, &str) -> Result<T, IoError>,
) -> Result<Vec<Vec<T>>, IoError> {
    let items = array(v, path)?;
    if items.len() != rows {
        return Err(schema(path, format!("expected {rows} rows, found {}", items.len())));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let rp = format!("{path}[{i}]");
            let row = array(row, &rp)?;
            if row.len() != cols {
                return Err(schema(&rp, format!("expected {cols} entries, found {}", row.len())));
            }
            row.iter().enumerate().map(|(j, x)| cell(x, &format!("{rp}[{j}]"))).collect()
        })
        .collect()
}

fn index(v: &Value, path: &str, bound: usize) -> Result<usize, IoError> {
    let i = v.as_u64().ok_or_else(|| schema(path, "expected a non-negative integer"))?;
    match usize::try_from(i) {
        Ok(i) if i < bound => Ok(i),
        _ => Err(schema(path, format!("index {i} out of range 0..{bound}"))),
    }
}

fn opt_index(v: &Value, path: &str, bound: usize) -> Result<Option<usize>, IoError> {
    if v.is_null() {
        Ok(None)
    } else {
        index(v, path, bound).map(Some)
    }
}

fn boolean(v: &Value, path: &str) -> Result<bool, IoError> {
    v.as_bool().ok_or_else(|| schema(path, "expected a boolean"))
}

/// The canonical bytes of a structure.
pub fn emit(s: &Structure) -> String {
    let mut v = to_value(s);
    if let Value::Object(m) = &mut v {
        m.insert("version".into(), FORMAT_VERSION.into());
    }
    emit_value(&v)
}

/// Canonical text of any JSON value built from this crate's reports.
pub fn emit_value(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Array(items) if is_flat(v) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, x, indent);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, x, indent + 2);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            let sorted: BTreeMap<&String, &Value> = m.iter().collect();
            out.push_str("{\n");
            for (i, (k, x)) in sorted.iter().enumerate() {
                pad(out, indent + 2);
                let _ = write!(out, "{}: ", Value::String((*k).clone()));
                write_value(out, x, indent + 2);
                out.push_str(if i + 1 < sorted.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn obj(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

fn opt_rows(rows: &[Vec<Option<usize>>]) -> Value {
    rows.iter().map(|r| r.iter().map(|x| x.map_or(Value::Null, Value::from)).collect::<Vec<_>>()).collect()
}

pub fn to_value(s: &Structure) -> Value {
    match s {
        Structure::InverseSemigroup(x) => {
            let mut pairs = vec![
                ("kind", s.kind().into()),
                ("elements", x.elements.clone().into()),
                ("table", x.table.clone().into()),
            ];
            if let Some(z) = x.zero {
                pairs.push(("zero", z.into()));
            }
            obj(pairs)
        }
        Structure::OrderedGroupoid(x) => {
            let mut pairs = vec![
                ("kind", s.kind().into()),
                ("elements", x.elements.clone().into()),
                ("dom", x.dom.clone().into()),
                ("cod", x.cod.clone().into()),
                ("inv", x.inv.clone().into()),
                ("comp", opt_rows(&x.comp)),
            ];
            if let Some(leq) = &x.leq {
                pairs.push(("leq", leq.clone().into()));
            }
            obj(pairs)
        }
        Structure::Category(x) => obj(vec![
            ("kind", s.kind().into()),
            ("arrows", x.arrows.clone().into()),
            ("dom", x.dom.clone().into()),
            ("cod", x.cod.clone().into()),
            ("comp", opt_rows(&x.comp)),
        ]),
        Structure::McAlisterTriple(x) => obj(vec![
            ("kind", s.kind().into()),
            ("group", to_value(&Structure::InverseSemigroup(x.group.clone()))),
            (
                "poset",
                obj(vec![("elements", x.points.clone().into()), ("leq", x.leq.clone().into())]),
            ),
            ("action", x.action.clone().into()),
            ("Y", x.y.clone().into()),
        ]),
        Structure::AffineSystem(x) => obj(vec![
            ("kind", s.kind().into()),
            ("category", to_value(&Structure::Category(x.category.clone()))),
            ("groupoid", to_value(&Structure::OrderedGroupoid(x.groupoid.clone()))),
            ("pi", x.pi.clone().into()),
            ("action", opt_rows(&x.action)),
        ]),
        Structure::Morphism(x) => {
            let mut pairs = vec![
                ("kind", s.kind().into()),
                ("source", to_value(&x.source)),
                ("target", to_value(&x.target)),
                ("map", x.map.clone().into()),
            ];
            if let Some(c) = &x.category_map {
                pairs.push(("category_map", c.clone().into()));
            }
            obj(pairs)
        }
    }
}
