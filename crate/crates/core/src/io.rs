//! JSON file formats for ideals, arrangements, matroids and graphs.
//!
//! Ideals: `{"n": 5, "generators": [g, ...]}` where a generator is a list of
//! terms `[monomial, coefficient]`, a single such term, or a string in the
//! element grammar (`"e_{23} - e_{13} + e_{12}"`). A monomial is an index
//! array `[1, 2]`, a string `"1,2"` / `"12"`, or a one-string array `["1,2"]`.
//! Coefficients are rational strings (`"-3/2"`) or integers. Output always
//! uses index arrays and coefficient strings.

use serde_json::{json, Value};

use crate::exterior::{ExtElement, Monomial};
use crate::graph::Graph;
use crate::ideal::GradedIdeal;
use crate::matroid::{Arrangement, Matroid};
use crate::scalar::Rational;
use crate::{Error, Result};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field \"{key}\"")))
}

fn count(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(format!("\"{key}\" must be a nonnegative integer")))
}

fn index(v: &Value) -> Result<usize> {
    v.as_u64()
        .filter(|&k| k >= 1)
        .map(|k| k as usize)
        .ok_or_else(|| parse_err(format!("expected a positive index, found {v}")))
}

fn rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => s.trim().parse(),
        Value::Number(x) => x
            .as_i64()
            .map(Rational::from_integer)
            .ok_or_else(|| parse_err(format!("coefficient {x} is not an integer; use a string like \"3/2\""))),
        other => Err(parse_err(format!("expected a coefficient, found {other}"))),
    }
}

fn monomial(v: &Value) -> Result<Monomial> {
    match v {
        Value::String(s) => s.parse(),
        Value::Array(items) => match items.as_slice() {
            [Value::String(s)] => s.parse(),
            _ => Monomial::from_indices(&items.iter().map(index).collect::<Result<Vec<_>>>()?),
        },
        other => Err(parse_err(format!("expected a monomial, found {other}"))),
    }
}

fn is_coefficient(v: &Value) -> bool {
    matches!(v, Value::String(_) | Value::Number(_))
}

fn generator(n: usize, v: &Value) -> Result<ExtElement> {
    match v {
        Value::String(s) => ExtElement::parse(n, s),
        Value::Array(items) if items.len() == 2 && is_coefficient(&items[1]) && !items[0].is_number() => {
            ExtElement::from_terms(n, [(monomial(&items[0])?, rational(&items[1])?)])
        }
        Value::Array(terms) => {
            let parsed = terms
                .iter()
                .map(|t| match t.as_array().map(Vec::as_slice) {
                    Some([m, c]) => Ok((monomial(m)?, rational(c)?)),
                    _ => Err(parse_err(format!("expected a term [monomial, coefficient], found {t}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            ExtElement::from_terms(n, parsed)
        }
        other => Err(parse_err(format!("expected a generator, found {other}"))),
    }
}

pub fn ideal_from_json(v: &Value) -> Result<GradedIdeal> {
    let n = count(v, "n")?;
    let gens = field(v, "generators")?
        .as_array()
        .ok_or_else(|| parse_err("\"generators\" must be an array"))?;
    let parsed = gens
        .iter()
        .enumerate()
        .map(|(k, g)| generator(n, g).map_err(|e| parse_err(format!("generator {}: {e}", k + 1))))
        .collect::<Result<Vec<_>>>()?;
    if parsed.iter().all(ExtElement::is_zero) {
        return GradedIdeal::zero(n);
    }
    GradedIdeal::new(n, parsed.into_iter().filter(|g| !g.is_zero()).collect())
}

/// Terms in the order of the text rendering.
pub fn element_to_json(u: &ExtElement) -> Value {
    let mut terms: Vec<_> = u.terms().collect();
    terms.sort_by_key(|(m, _)| (m.degree(), std::cmp::Reverse(m.0)));
    Value::Array(
        terms
            .into_iter()
            .map(|(m, c)| json!([m.indices(), c.to_string()]))
            .collect(),
    )
}

pub fn ideal_to_json(j: &GradedIdeal) -> Value {
    json!({
        "n": j.n(),
        "generators": j.generators().iter().map(element_to_json).collect::<Vec<_>>(),
    })
}

pub fn arrangement_from_json(v: &Value) -> Result<Arrangement> {
    let l = count(v, "l")?;
    let forms = field(v, "forms")?
        .as_array()
        .ok_or_else(|| parse_err("\"forms\" must be an array"))?
        .iter()
        .enumerate()
        .map(|(k, f)| {
            f.as_array()
                .ok_or_else(|| parse_err(format!("form {} must be an array", k + 1)))?
                .iter()
                .map(rational)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| parse_err(format!("form {}: {e}", k + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    Arrangement::new(l, forms)
}

pub fn arrangement_to_json(a: &Arrangement) -> Value {
    json!({
        "l": a.l(),
        "forms": a.forms().iter()
            .map(|f| f.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

fn index_sets(v: &Value, key: &str) -> Result<Vec<Vec<usize>>> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| parse_err(format!("\"{key}\" must be an array")))?
        .iter()
        .map(|s| {
            s.as_array()
                .ok_or_else(|| parse_err(format!("entries of \"{key}\" must be index arrays")))?
                .iter()
                .map(index)
                .collect()
        })
        .collect()
}

pub fn matroid_from_json(v: &Value) -> Result<Matroid> {
    let n = count(v, "n")?;
    let circuits = index_sets(v, "circuits")?
        .iter()
        .map(|c| Monomial::from_indices(c))
        .collect::<Result<Vec<_>>>()?;
    Matroid::from_circuits(n, circuits)
}

pub fn matroid_to_json(m: &Matroid) -> Value {
    json!({
        "n": m.n(),
        "circuits": m.all_circuits().iter().map(|c| c.indices()).collect::<Vec<_>>(),
    })
}

pub fn graph_from_json(v: &Value) -> Result<Graph> {
    let n = count(v, "n")?;
    let edges = index_sets(v, "edges")?
        .into_iter()
        .map(|e| match e.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(parse_err(format!("an edge needs two vertices, found {e:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Graph::new(n, &edges)
}

/// Parses text, reporting the line and column of JSON syntax errors.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("line {} column {}: {e}", e.line(), e.column())))
}
