//! JSON encoding of fields, scalars, words, polynomials, algebras, points,
//! charts, canonical forms and ideals.
//!
//! Rationals are strings `"a/b"` in lowest terms (`"a"` when `b = 1`);
//! `F_p` elements are integers in `[0, p)`. On input, rationals may also be
//! JSON integers and `F_p` elements may be any integer or rational string,
//! which are reduced. Words are arrays of 1-based generator indices.
//! Decoding errors carry a JSON-pointer style path.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::freealg::{AlgebraPresentation, NCPoly, Word};
use crate::linear::{format_rational, parse_rational, FieldValue, Matrix, ScalarField, Vector};
use crate::orbits::{canonicalize, CanonicalForm, IdealData};
use crate::points::{ChartIndex, GroupElement, PointData, ProjectivePoint};

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: if path.is_empty() { "/".into() } else { path.into() },
        message: message.into(),
    }
}

fn child(path: &str, key: impl std::fmt::Display) -> String {
    format!("{path}/{key}")
}

fn get<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.as_object()
        .ok_or_else(|| err(path, "expected an object"))?
        .get(key)
        .ok_or_else(|| err(path, format!("missing key \"{key}\"")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn usize_of(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| err(path, "expected a non-negative integer"))
}

pub fn field_to_json(f: ScalarField) -> Value {
    match f {
        ScalarField::Rationals => json!({"kind": "Q"}),
        ScalarField::Prime(p) => json!({"kind": "Fp", "p": p}),
    }
}

pub fn field_from_json(v: &Value, path: &str) -> Result<ScalarField> {
    let kind = get(v, "kind", path)?
        .as_str()
        .ok_or_else(|| err(&child(path, "kind"), "expected a string"))?;
    match kind {
        "Q" => Ok(ScalarField::Rationals),
        "Fp" => {
            let p_path = child(path, "p");
            let p = get(v, "p", path)?
                .as_u64()
                .ok_or_else(|| err(&p_path, "expected a positive integer"))?;
            ScalarField::prime(p).map_err(|e| err(&p_path, e.to_string()))
        }
        other => Err(err(&child(path, "kind"), format!("unknown field kind \"{other}\""))),
    }
}

pub fn scalar_to_json(x: &FieldValue) -> Value {
    match x {
        FieldValue::Rational(r) => Value::String(format_rational(r)),
        FieldValue::Modular { value, .. } => json!(value),
    }
}

pub fn scalar_from_json(field: ScalarField, v: &Value, path: &str) -> Result<FieldValue> {
    let r = match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| err(path, format!("not a rational number: \"{s}\"")))?,
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| err(path, "expected an integer"))?;
            return Ok(field.from_i64(i));
        }
        _ => return Err(err(path, "expected a scalar (string or integer)")),
    };
    field.from_rational(&r).map_err(|e| err(path, e.to_string()))
}

pub fn vector_to_json(v: &[FieldValue]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn vector_from_json(field: ScalarField, v: &Value, path: &str) -> Result<Vector> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| scalar_from_json(field, x, &child(path, i)))
        .collect()
}

pub fn matrix_to_json(a: &Matrix) -> Value {
    Value::Array(a.to_rows().iter().map(|r| vector_to_json(r)).collect())
}

pub fn matrix_from_json(field: ScalarField, v: &Value, path: &str) -> Result<Matrix> {
    let rows = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| vector_from_json(field, r, &child(path, i)))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field, rows).map_err(|e| err(path, e.to_string()))
}

pub fn word_to_json(w: &Word) -> Value {
    json!(w.to_one_based())
}

pub fn word_from_json(v: &Value, path: &str) -> Result<Word> {
    let letters = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| usize_of(x, &child(path, i)))
        .collect::<Result<Vec<_>>>()?;
    Word::from_one_based(&letters).ok_or_else(|| err(path, "generator indices are 1-based"))
}

/// Terms in length-lex order of their words.
pub fn poly_to_json(f: &NCPoly) -> Value {
    Value::Array(
        f.terms()
            .map(|(w, c)| json!({"coeff": scalar_to_json(c), "word": word_to_json(w)}))
            .collect(),
    )
}

pub fn poly_from_json(field: ScalarField, v: &Value, path: &str) -> Result<NCPoly> {
    let mut f = NCPoly::zero(field);
    for (i, t) in array(v, path)?.iter().enumerate() {
        let tp = child(path, i);
        let c = scalar_from_json(field, get(t, "coeff", &tp)?, &child(&tp, "coeff"))?;
        let w = word_from_json(get(t, "word", &tp)?, &child(&tp, "word"))?;
        f.add_term(w, c);
    }
    Ok(f)
}

pub fn algebra_to_json(a: &AlgebraPresentation) -> Value {
    json!({
        "m": a.m(),
        "relations": a.relations().iter().map(poly_to_json).collect::<Vec<_>>(),
        "field": field_to_json(a.field()),
    })
}

pub fn algebra_from_json(v: &Value, path: &str) -> Result<AlgebraPresentation> {
    let m = usize_of(get(v, "m", path)?, &child(path, "m"))?;
    let field = field_from_json(get(v, "field", path)?, &child(path, "field"))?;
    let rp = child(path, "relations");
    let relations = match v.get("relations") {
        None | Some(Value::Null) => Vec::new(),
        Some(r) => array(r, &rp)?
            .iter()
            .enumerate()
            .map(|(i, r)| poly_from_json(field, r, &child(&rp, i)))
            .collect::<Result<Vec<_>>>()?,
    };
    AlgebraPresentation::new(m, relations, field).map_err(|e| err(&rp, e.to_string()))
}

pub fn point_to_json(p: &PointData) -> Value {
    json!({
        "algebra": algebra_to_json(p.algebra()),
        "n": p.n(),
        "matrices": p.matrices().iter().map(matrix_to_json).collect::<Vec<_>>(),
        "y": vector_to_json(p.y()),
    })
}

pub fn point_from_json(v: &Value, path: &str) -> Result<PointData> {
    let algebra = algebra_from_json(get(v, "algebra", path)?, &child(path, "algebra"))?;
    point_over(Arc::new(algebra), v, path)
}

/// Decodes a point, reusing an already parsed algebra.
pub fn point_over(algebra: Arc<AlgebraPresentation>, v: &Value, path: &str) -> Result<PointData> {
    let field = algebra.field();
    let n = usize_of(get(v, "n", path)?, &child(path, "n"))?;
    let mp = child(path, "matrices");
    let matrices = array(get(v, "matrices", path)?, &mp)?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let ap = child(&mp, i);
            let a = matrix_from_json(field, a, &ap)?;
            if a.rows() != n || a.cols() != n {
                return Err(err(&ap, format!("expected a {n}x{n} matrix")));
            }
            Ok(a)
        })
        .collect::<Result<Vec<_>>>()?;
    let y = vector_from_json(field, get(v, "y", path)?, &child(path, "y"))?;
    PointData::new(algebra, matrices, y).map_err(|e| err(path, e.to_string()))
}

pub fn chart_to_json(f: &ChartIndex) -> Value {
    Value::Array(f.entries().iter().map(poly_to_json).collect())
}

pub fn chart_from_json(field: ScalarField, v: &Value, path: &str) -> Result<ChartIndex> {
    let entries = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, f)| poly_from_json(field, f, &child(path, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChartIndex::new(entries))
}

/// A list of charts.
pub fn chart_family_from_json(field: ScalarField, v: &Value, path: &str) -> Result<Vec<ChartIndex>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, f)| chart_from_json(field, f, &child(path, i)))
        .collect()
}

pub fn group_element_to_json(g: &GroupElement) -> Value {
    matrix_to_json(g.matrix())
}

pub fn group_element_from_json(field: ScalarField, v: &Value, path: &str) -> Result<GroupElement> {
    GroupElement::new(matrix_from_json(field, v, path)?).map_err(|e| err(path, e.to_string()))
}

pub fn projective_point_to_json(p: &ProjectivePoint) -> Value {
    vector_to_json(p.coordinates())
}

fn words_to_json(ws: &[Word]) -> Value {
    Value::Array(ws.iter().map(word_to_json).collect())
}

fn words_from_json(v: &Value, path: &str) -> Result<Vec<Word>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, w)| word_from_json(w, &child(path, i)))
        .collect()
}

pub fn canonical_form_to_json(c: &CanonicalForm) -> Value {
    let border: Vec<Value> = c
        .border()
        .iter()
        .map(|(b, coeffs)| json!({"word": word_to_json(b), "coeffs": vector_to_json(coeffs)}))
        .collect();
    json!({
        "algebra": algebra_to_json(c.algebra()),
        "n": c.n(),
        "basis_words": words_to_json(c.basis_words()),
        "border": border,
        "canonical_point": point_to_json(c.canonical_point()),
    })
}

/// Recomputes the canonical form of the stored canonical point and checks
/// it against the stored basis and border data.
pub fn canonical_form_from_json(v: &Value, path: &str) -> Result<CanonicalForm> {
    let pp = child(path, "canonical_point");
    let point = point_from_json(get(v, "canonical_point", path)?, &pp)?;
    let form = canonicalize(&point).map_err(|e| err(&pp, e.to_string()))?;
    let canonical = canonical_form_to_json(&form);
    if ["basis_words", "border"]
        .iter()
        .any(|k| v.get(*k).is_some_and(|x| x != &canonical[*k]))
    {
        return Err(err(path, "stored basis or border data disagree with the canonical point"));
    }
    if form.canonical_point() != &point {
        return Err(err(&pp, "point is not in canonical form"));
    }
    Ok(form)
}

pub fn ideal_to_json(i: &IdealData) -> Value {
    let generators: Vec<Value> = i
        .generators()
        .iter()
        .map(|(b, g)| json!({"word": word_to_json(b), "poly": poly_to_json(g)}))
        .collect();
    json!({
        "algebra": algebra_to_json(i.algebra()),
        "n": i.n(),
        "basis_words": words_to_json(i.basis_words()),
        "generators": generators,
    })
}

pub fn ideal_from_json(v: &Value, path: &str) -> Result<IdealData> {
    let algebra = Arc::new(algebra_from_json(get(v, "algebra", path)?, &child(path, "algebra"))?);
    let field = algebra.field();
    let n = usize_of(get(v, "n", path)?, &child(path, "n"))?;
    let basis = words_from_json(get(v, "basis_words", path)?, &child(path, "basis_words"))?;
    let gp = child(path, "generators");
    let mut generators = BTreeMap::new();
    for (i, g) in array(get(v, "generators", path)?, &gp)?.iter().enumerate() {
        let ip = child(&gp, i);
        let b = word_from_json(get(g, "word", &ip)?, &child(&ip, "word"))?;
        let f = poly_from_json(field, get(g, "poly", &ip)?, &child(&ip, "poly"))?;
        if generators.insert(b, f).is_some() {
            return Err(err(&ip, "duplicate border word"));
        }
    }
    IdealData::new(algebra, n, basis, generators).map_err(|e| err(path, e.to_string()))
}

/// Sorts every object's keys (a no-op for the default `serde_json` map,
/// kept so output does not depend on that feature flag).
pub fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().map(|(k, v)| (k, sorted(v))).collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().collect::<Map<_, _>>())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sorted).collect()),
        other => other,
    }
}
