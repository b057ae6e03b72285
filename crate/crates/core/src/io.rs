//! JSON algebra and homomorphism files.
//!
//! ```json
//! {
//!   "signature": [{"name": "xor", "arity": 2}, {"name": "zero", "arity": 0}],
//!   "carrier": ["0", "1"],
//!   "dist": [["0", "1/2"], ["1/2", "0"]],
//!   "ops": {"xor": [["0", "1"], ["1", "0"]], "zero": "0"}
//! }
//! ```
//!
//! Distances are numbers or strings holding a decimal, a fraction or `inf`;
//! both are read exactly. A homomorphism file holds `source` and `target`
//! algebras and `map`, the target name of each source element in order.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{
    check_homomorphism, AlgebraError, HomDefect, Homomorphism, MetricAlgebra, OpTable,
};
use crate::metric::{DistMatrix, ExtDistance};
use crate::scalar::Scalar;
use crate::term::{Signature, SyntaxError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("at {path}: {message}")]
    Format { path: String, message: String },
    #[error("signature: {0}")]
    Signature(#[from] SyntaxError),
    #[error("{0}")]
    Algebra(#[from] AlgebraError),
    #[error("not a homomorphism: {0}")]
    Homomorphism(HomDefect),
}

fn format_err(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Format { path: path.into(), message: message.into() }
}

pub fn parse_json(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json {
        line: e.line(),
        column: e.column(),
        message: {
            let full = e.to_string();
            full.rsplit_once(" at line ").map_or(full.clone(), |(m, _)| m.to_string())
        },
    })
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, IoError> {
    obj.get(key).ok_or_else(|| format_err(path, format!("missing field `{key}`")))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, IoError> {
    v.as_object().ok_or_else(|| format_err(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| format_err(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str, IoError> {
    v.as_str().ok_or_else(|| format_err(path, "expected a string"))
}

fn distance<T: Scalar>(v: &Value, path: &str) -> Result<ExtDistance<T>, IoError> {
    let text = match v {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) => n.to_string(),
        _ => return Err(format_err(path, "expected a distance literal")),
    };
    ExtDistance::parse(&text)
        .ok_or_else(|| format_err(path, format!("`{text}` is not a nonnegative distance literal")))
}

/// Reads an algebra without checking the metric axioms or table ranges, so
/// that an invalid candidate can still be inspected; shape errors (wrong
/// nesting, unknown names) are reported with their location.
pub fn algebra_from_value_unchecked<T: Scalar>(v: &Value) -> Result<MetricAlgebra<T>, IoError> {
    algebra_at(v, "$")
}

fn algebra_at<T: Scalar>(v: &Value, root: &str) -> Result<MetricAlgebra<T>, IoError> {
    let obj = object(v, root)?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "signature" | "carrier" | "dist" | "ops") {
            return Err(format_err(root, format!("unknown field `{key}`")));
        }
    }
    let mut symbols = Vec::new();
    let sig_path = format!("{root}.signature");
    for (i, s) in array(field(obj, root, "signature")?, &sig_path)?.iter().enumerate() {
        let path = format!("{sig_path}[{i}]");
        let s = object(s, &path)?;
        let name = string(field(s, &path, "name")?, &format!("{path}.name"))?;
        let arity = field(s, &path, "arity")?
            .as_u64()
            .ok_or_else(|| format_err(format!("{path}.arity"), "expected a natural number"))?;
        symbols.push((name.to_string(), arity as usize));
    }
    let sig = Signature::new(symbols)?;

    let carrier_path = format!("{root}.carrier");
    let names: Vec<String> = array(field(obj, root, "carrier")?, &carrier_path)?
        .iter()
        .enumerate()
        .map(|(i, x)| string(x, &format!("{carrier_path}[{i}]")).map(str::to_string))
        .collect::<Result<_, _>>()?;
    if names.is_empty() {
        return Err(format_err(carrier_path, "carrier is empty"));
    }
    let n = names.len();
    let lookup = |x: &Value, path: &str| -> Result<usize, IoError> {
        let name = string(x, path)?;
        names
            .iter()
            .position(|m| m == name)
            .ok_or_else(|| format_err(path, format!("`{name}` is not a carrier element")))
    };

    let dist_path = format!("{root}.dist");
    let rows = array(field(obj, root, "dist")?, &dist_path)?;
    if rows.len() != n {
        return Err(format_err(&dist_path, format!("expected {n} rows, found {}", rows.len())));
    }
    let mut matrix = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let path = format!("{dist_path}[{i}]");
        let row = array(row, &path)?;
        if row.len() != n {
            return Err(format_err(&path, format!("expected {n} entries, found {}", row.len())));
        }
        matrix.push(
            row.iter()
                .enumerate()
                .map(|(j, x)| distance(x, &format!("{path}[{j}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let dist = DistMatrix::from_rows(matrix).map_err(|e| format_err(&dist_path, e.to_string()))?;

    let ops_path = format!("{root}.ops");
    let ops_obj = object(field(obj, root, "ops")?, &ops_path)?;
    if let Some(extra) = ops_obj.keys().find(|k| sig.index_of(k).is_none()) {
        return Err(format_err(&ops_path, format!("`{extra}` is not in the signature")));
    }
    let mut ops = Vec::new();
    for s in sig.symbols() {
        let path = format!("{ops_path}.{}", s.name);
        let table = ops_obj
            .get(&s.name)
            .ok_or_else(|| format_err(&ops_path, format!("missing table for `{}`", s.name)))?;
        let mut cells = Vec::new();
        flatten(table, s.arity, n, &path, &lookup, &mut cells)?;
        ops.push(OpTable::new(s.arity, cells));
    }
    Ok(MetricAlgebra::from_parts_unchecked(sig, names.clone(), dist, ops))
}

fn flatten(
    v: &Value,
    depth: usize,
    n: usize,
    path: &str,
    lookup: &dyn Fn(&Value, &str) -> Result<usize, IoError>,
    cells: &mut Vec<usize>,
) -> Result<(), IoError> {
    if depth == 0 {
        cells.push(lookup(v, path)?);
        return Ok(());
    }
    let items = array(v, path)?;
    if items.len() != n {
        return Err(format_err(path, format!("expected {n} entries, found {}", items.len())));
    }
    for (i, item) in items.iter().enumerate() {
        flatten(item, depth - 1, n, &format!("{path}[{i}]"), lookup, cells)?;
    }
    Ok(())
}

/// Reads and validates an algebra.
pub fn algebra_from_value<T: Scalar>(v: &Value) -> Result<MetricAlgebra<T>, IoError> {
    let a: MetricAlgebra<T> = algebra_from_value_unchecked(v)?;
    let defects = a.validate();
    if defects.is_empty() {
        Ok(a)
    } else {
        Err(AlgebraError::Invalid(defects).into())
    }
}

pub fn parse_algebra_unchecked<T: Scalar>(text: &str) -> Result<MetricAlgebra<T>, IoError> {
    algebra_from_value_unchecked(&parse_json(text)?)
}

pub fn parse_algebra<T: Scalar>(text: &str) -> Result<MetricAlgebra<T>, IoError> {
    algebra_from_value(&parse_json(text)?)
}

fn distance_value<T: Scalar>(d: &ExtDistance<T>) -> Value {
    Value::String(d.to_string())
}

fn nest(table: &[usize], names: &[String], depth: usize, n: usize) -> Value {
    if depth == 0 {
        return Value::String(names[table[0]].clone());
    }
    let stride = table.len() / n;
    Value::Array(table.chunks(stride).map(|c| nest(c, names, depth - 1, n)).collect())
}

/// Inverse of [`algebra_from_value`]; distances are written as exact strings.
pub fn algebra_to_value<T: Scalar>(a: &MetricAlgebra<T>) -> Value {
    let signature: Vec<Value> =
        a.signature().symbols().iter().map(|s| json!({"name": s.name, "arity": s.arity})).collect();
    let dist: Vec<Value> =
        a.dist().rows().map(|row| Value::Array(row.iter().map(distance_value).collect())).collect();
    let mut ops = Map::new();
    for (s, t) in a.signature().symbols().iter().zip(a.tables()) {
        ops.insert(s.name.clone(), nest(t.cells(), a.names(), s.arity, a.len()));
    }
    json!({
        "signature": signature,
        "carrier": a.names(),
        "dist": dist,
        "ops": ops,
    })
}

pub fn render_algebra<T: Scalar>(a: &MetricAlgebra<T>) -> String {
    serde_json::to_string_pretty(&algebra_to_value(a)).expect("JSON values serialize") + "\n"
}

/// Reads a homomorphism file; both algebras are validated.
pub fn parse_homomorphism<T: Scalar>(text: &str) -> Result<Homomorphism<T>, IoError> {
    let v = parse_json(text)?;
    let obj = object(&v, "$")?;
    let source: MetricAlgebra<T> = algebra_at(field(obj, "$", "source")?, "$.source")?;
    let target: MetricAlgebra<T> = algebra_at(field(obj, "$", "target")?, "$.target")?;
    for a in [&source, &target] {
        let defects = a.validate();
        if !defects.is_empty() {
            return Err(AlgebraError::Invalid(defects).into());
        }
    }
    let map = array(field(obj, "$", "map")?, "$.map")?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let path = format!("$.map[{i}]");
            let name = string(x, &path)?;
            target
                .index_of_name(name)
                .ok_or_else(|| format_err(&path, format!("`{name}` is not a target element")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    check_homomorphism(map, source, target).map_err(IoError::Homomorphism)
}

pub fn homomorphism_to_value<T: Scalar>(h: &Homomorphism<T>) -> Value {
    let map: Vec<&str> = h.map().iter().map(|&y| h.target().name(y)).collect();
    json!({
        "source": algebra_to_value(h.source()),
        "target": algebra_to_value(h.target()),
        "map": map,
    })
}
