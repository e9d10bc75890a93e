//! JSON encoding of exact values. Every number travels as a string.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numkernel::rational::{format_rational, parse_rational, Rational};
use crate::numkernel::{IntMatrix, RatMatrix};
use crate::polyhedron::{LinearConstraint, PartiallyOpenPolyhedron};

pub fn rat_json(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn rat_vec_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat_json).collect())
}

pub fn int_vec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn rat_matrix_json(m: &RatMatrix) -> Value {
    Value::Array(m.rows_iter().map(rat_vec_json).collect())
}

pub fn int_matrix_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| int_vec_json(m.row(i))).collect())
}

pub fn polyhedron_json(p: &PartiallyOpenPolyhedron) -> Value {
    json!({
        "dim": p.dim(),
        "constraints": p.constraints().iter().map(LinearConstraint::to_json).collect::<Vec<_>>(),
    })
}

/// Accepts `"p/q"` strings and JSON integers.
pub fn parse_rat(v: &Value, field: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|_| Error::Parse(format!("{field}: not a rational: {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            parse_rational(&n.to_string()).map_err(|_| Error::Parse(format!("{field}: bad number")))
        }
        other => Err(Error::Parse(format!("{field}: expected a rational string, got {other}"))),
    }
}

pub fn parse_int(v: &Value, field: &str) -> Result<BigInt> {
    let r = parse_rat(v, field)?;
    if !r.is_integer() {
        return Err(Error::Parse(format!("{field}: expected an integer")));
    }
    Ok(r.to_integer())
}

pub fn parse_rat_vec(v: &Value, field: &str) -> Result<Vec<Rational>> {
    let arr = v.as_array().ok_or_else(|| Error::Parse(format!("{field}: expected an array")))?;
    arr.iter().enumerate().map(|(i, x)| parse_rat(x, &format!("{field}[{i}]"))).collect()
}

pub fn parse_int_vec(v: &Value, field: &str) -> Result<Vec<BigInt>> {
    let arr = v.as_array().ok_or_else(|| Error::Parse(format!("{field}: expected an array")))?;
    arr.iter().enumerate().map(|(i, x)| parse_int(x, &format!("{field}[{i}]"))).collect()
}

/// A matrix as a list of rows. An empty list needs `cols` to fix the width.
pub fn parse_rat_matrix(v: &Value, field: &str, cols: Option<usize>) -> Result<RatMatrix> {
    let arr = v.as_array().ok_or_else(|| Error::Parse(format!("{field}: expected a list of rows")))?;
    let rows: Vec<Vec<Rational>> =
        arr.iter().enumerate().map(|(i, r)| parse_rat_vec(r, &format!("{field}[{i}]"))).collect::<Result<_>>()?;
    let n = match (rows.first(), cols) {
        (Some(r), _) => r.len(),
        (None, Some(c)) => c,
        (None, None) => return Err(Error::Parse(format!("{field}: empty matrix"))),
    };
    RatMatrix::from_rows(rows, n).map_err(|_| Error::Dimension(format!("{field}: rows of unequal length")))
}

pub fn parse_constraint(v: &Value, field: &str, dim: usize) -> Result<LinearConstraint> {
    let a = parse_rat_vec(v.get("a").ok_or_else(|| Error::Parse(format!("{field}: missing \"a\"")))?, &format!("{field}.a"))?;
    if a.len() != dim {
        return Err(Error::Dimension(format!("{field}.a has length {}, expected {dim}", a.len())));
    }
    let beta = parse_rat(v.get("beta").ok_or_else(|| Error::Parse(format!("{field}: missing \"beta\"")))?, &format!("{field}.beta"))?;
    let strict = match v.get("strict") {
        None => false,
        Some(Value::Bool(s)) => *s,
        Some(_) => return Err(Error::Parse(format!("{field}.strict: expected a boolean"))),
    };
    Ok(LinearConstraint::new(a, beta, strict))
}

/// `{"dim": n, "constraints": [...]}`, or a bare list when `dim` is known.
pub fn parse_polyhedron(v: &Value, field: &str, dim: Option<usize>) -> Result<PartiallyOpenPolyhedron> {
    let (list, d) = match v {
        Value::Array(list) => {
            let d = dim.ok_or_else(|| Error::Parse(format!("{field}: dimension unknown")))?;
            (list, d)
        }
        Value::Object(o) => {
            let list = o
                .get("constraints")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("{field}: missing \"constraints\" list")))?;
            let d = match o.get("dim") {
                Some(x) => x.as_u64().ok_or_else(|| Error::Parse(format!("{field}.dim: expected a count")))? as usize,
                None => dim.ok_or_else(|| Error::Parse(format!("{field}: missing \"dim\"")))?,
            };
            if let Some(expected) = dim {
                if expected != d {
                    return Err(Error::Dimension(format!("{field}: arity {d}, expected {expected}")));
                }
            }
            (list, d)
        }
        _ => return Err(Error::Parse(format!("{field}: expected a constraint system"))),
    };
    let rows = list
        .iter()
        .enumerate()
        .map(|(i, c)| parse_constraint(c, &format!("{field}.constraints[{i}]"), d))
        .collect::<Result<Vec<_>>>()?;
    PartiallyOpenPolyhedron::new(d, rows)
}
