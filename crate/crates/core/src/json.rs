//! Wire format: rationals are strings `"p"` or `"p/q"`, matrices are arrays
//! of rows, subspaces are their canonical basis rows, flags are chains of
//! subspaces.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Subspace};
use crate::flags::Flag;
use crate::scalar::{format_rational, parse_rational, Rational};

fn bad(what: &str, v: &Value) -> Error {
    Error::InvalidInput(format!("expected {what}, found {v}"))
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

/// Accepts `"p/q"` strings and plain JSON integers.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(bad("a rational", v)),
    }
}

pub fn vector_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_to_json).collect())
}

pub fn vector_from_json(v: &Value) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| bad("an array of rationals", v))?
        .iter()
        .map(rational_from_json)
        .collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(m.rows_iter().map(vector_to_json).collect())
}

/// `cols` fixes the width so that zero-row matrices parse.
pub fn matrix_from_json(v: &Value, cols: usize) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad("an array of rows", v))?
        .iter()
        .map(vector_from_json)
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(cols, rows)
}

pub fn subspace_to_json(s: &Subspace) -> Value {
    matrix_to_json(s.basis())
}

pub fn subspace_from_json(v: &Value, n: usize) -> Result<Subspace> {
    Subspace::span(n, &matrix_from_json(v, n)?)
}

pub fn flag_to_json(f: &Flag) -> Value {
    json!({
        "dims": f.dims(),
        "chain": f.chain().iter().map(subspace_to_json).collect::<Vec<_>>(),
    })
}

/// Accepts `{"chain": [...]}` or a bare array of subspaces.
pub fn flag_from_json(v: &Value, n: usize) -> Result<Flag> {
    let chain = v.get("chain").unwrap_or(v);
    let members = chain
        .as_array()
        .ok_or_else(|| bad("a chain of subspaces", v))?
        .iter()
        .map(|s| subspace_from_json(s, n))
        .collect::<Result<Vec<_>>>()?;
    Flag::new(n, members)
}

pub fn int_matrix_from_json(v: &Value) -> Result<Vec<Vec<i64>>> {
    v.as_array()
        .ok_or_else(|| bad("an array of integer rows", v))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| bad("an integer row", row))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("an integer", x)))
                .collect()
        })
        .collect()
}

pub fn usize_from_json(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::InvalidInput(format!("missing or invalid \"{key}\"")))
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::InvalidInput(format!("missing \"{key}\"")))
}

/// Pretty-prints with the given indent width; `0` gives compact output.
pub fn to_string_indent(v: &Value, indent: usize) -> String {
    if indent == 0 {
        return v.to_string();
    }
    let pad = vec![b' '; indent];
    let mut out = Vec::new();
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    serde::Serialize::serialize(v, &mut ser).expect("serialising a Value cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}
