//! Canonical JSON for every value type.
//!
//! Rationals are strings "p/q" (or "p" for integers). Complex scalars are
//! `{"re": "p/q", "im": "p/q"}`; readers also accept a bare rational string
//! or integer for real scalars. Object keys come out sorted because
//! `serde_json::Map` is ordered.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::arith::{format_rational, parse_rational, GaussRational, NuPolynomial, NuRationalFunction, Rational};
use crate::error::{Error, Result};
use crate::models::disk::DiskElement;
use crate::models::torus::{Cyclotomic, FourierSum, MoyalData, TorusQuotient};
use crate::quotient::QuotientOperator;
use crate::star::{RawNuSeries, StarElement};
use crate::tensor::{symmetrize, SymbolTensor};

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .and_then(|x| x.to_usize())
        .ok_or_else(|| bad(format!("field {key:?} must be a nonnegative integer")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn index_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    array(v, what)?
        .iter()
        .map(|x| x.as_u64().and_then(|x| x.to_usize()).ok_or_else(|| bad(format!("{what} entries must be nonnegative integers"))))
        .collect()
}

fn int_list(v: &Value, what: &str) -> Result<Vec<i64>> {
    array(v, what)?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| bad(format!("{what} entries must be integers"))))
        .collect()
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(crate::arith::int)
            .ok_or_else(|| bad(format!("{n} is not an integer; write rationals as \"p/q\""))),
        _ => Err(bad("expected a rational string \"p/q\"")),
    }
}

pub fn gauss_to_json(c: &GaussRational) -> Value {
    json!({"re": rational_to_json(&c.re), "im": rational_to_json(&c.im)})
}

pub fn gauss_from_json(v: &Value) -> Result<GaussRational> {
    match v {
        Value::Object(_) => {
            let re = v.get("re").map(rational_from_json).transpose()?.unwrap_or_else(Rational::zero);
            let im = v.get("im").map(rational_from_json).transpose()?.unwrap_or_else(Rational::zero);
            Ok(GaussRational::new(re, im))
        }
        _ => Ok(GaussRational::real(rational_from_json(v)?)),
    }
}

/// Real coefficients as rational strings, complex ones as objects.
fn coeff_to_json(c: &GaussRational) -> Value {
    if c.is_real() {
        rational_to_json(&c.re)
    } else {
        gauss_to_json(c)
    }
}

pub fn polynomial_to_json(p: &NuPolynomial) -> Value {
    Value::Array(p.coeffs().iter().map(coeff_to_json).collect())
}

pub fn polynomial_from_json(v: &Value) -> Result<NuPolynomial> {
    Ok(NuPolynomial::new(array(v, "polynomial")?.iter().map(gauss_from_json).collect::<Result<_>>()?))
}

pub fn ratfun_to_json(f: &NuRationalFunction) -> Value {
    json!({"num": polynomial_to_json(f.numerator()), "den": polynomial_to_json(f.denominator())})
}

pub fn ratfun_from_json(v: &Value) -> Result<NuRationalFunction> {
    NuRationalFunction::new(polynomial_from_json(field(v, "num")?)?, polynomial_from_json(field(v, "den")?)?)
}

pub fn matrix_to_json(m: &[Vec<GaussRational>]) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(gauss_to_json).collect())).collect())
}

pub fn matrix_from_json(v: &Value) -> Result<Vec<Vec<GaussRational>>> {
    let rows = array(v, "matrix")?;
    let m: Vec<Vec<GaussRational>> = rows
        .iter()
        .map(|r| array(r, "matrix row")?.iter().map(gauss_from_json).collect())
        .collect::<Result<_>>()?;
    if m.is_empty() || m.iter().any(|r| r.len() != m.len()) {
        return Err(bad("matrix must be square and nonempty"));
    }
    Ok(m)
}

pub fn symbol_to_json(a: &SymbolTensor) -> Value {
    let entries: Vec<Value> = a
        .entries()
        .iter()
        .map(|((i, j), v)| {
            json!({
                "I": i.entries(),
                "J": j.entries(),
                "re": rational_to_json(&v.re),
                "im": rational_to_json(&v.im),
            })
        })
        .collect();
    json!({"n": a.n(), "k": a.degree(), "entries": entries})
}

/// Reads a symbol.
///
/// Each listed entry is filed under the sorted form of its index pair and
/// entries landing on the same sorted pair are averaged, so a symmetric
/// tensor may be given through any nonempty subset of each orbit. With
/// `"raw": true` the entries are instead a full, possibly unsymmetric tensor
/// (unlisted positions are zero) and are symmetrized.
pub fn symbol_from_json(v: &Value) -> Result<SymbolTensor> {
    let n = usize_field(v, "n")?;
    let k = usize_field(v, "k")?;
    let raw = v.get("raw").and_then(Value::as_bool).unwrap_or(false);
    let mut listed = Vec::new();
    for e in array(field(v, "entries")?, "entries")? {
        let i = index_list(field(e, "I")?, "I")?;
        let j = index_list(field(e, "J")?, "J")?;
        listed.push(((i, j), gauss_from_json(e)?));
    }
    if raw {
        return symmetrize(listed, n, k);
    }
    let mut groups: BTreeMap<(Vec<usize>, Vec<usize>), (GaussRational, usize)> = BTreeMap::new();
    for ((mut i, mut j), c) in listed {
        i.sort_unstable();
        j.sort_unstable();
        let g = groups.entry((i, j)).or_insert_with(|| (GaussRational::zero(), 0));
        g.0 += &c;
        g.1 += 1;
    }
    SymbolTensor::from_entries(
        n,
        k,
        groups.into_iter().map(|((i, j), (sum, count))| {
            let avg = sum.scale(&Rational::new(1.into(), count.into()));
            (i, j, avg)
        }),
    )
}

pub fn star_element_to_json(e: &StarElement) -> Value {
    let comps: Vec<Value> = e
        .components()
        .iter()
        .rev()
        .map(|c| if c.is_zero() { Value::Null } else { symbol_to_json(c) })
        .collect();
    json!({"n": e.n(), "level": e.level(), "components": comps})
}

pub fn star_element_from_json(v: &Value) -> Result<StarElement> {
    let n = usize_field(v, "n")?;
    let level = usize_field(v, "level")?;
    let comps = array(field(v, "components")?, "components")?;
    if comps.len() != level + 1 {
        return Err(bad(format!("level {level} needs {} components, got {}", level + 1, comps.len())));
    }
    let mut out = Vec::with_capacity(level + 1);
    for (r, c) in comps.iter().rev().enumerate() {
        let t = if c.is_null() {
            SymbolTensor::zero(n, r)
        } else {
            let t = symbol_from_json(c)?;
            if t.n() != n {
                return Err(bad(format!("component {r} has n = {}, expected {n}", t.n())));
            }
            t
        };
        out.push(t);
    }
    StarElement::new(n, out)
}

pub fn series_to_json(s: &RawNuSeries) -> Value {
    let powers: Map<String, Value> = s.powers().iter().map(|(p, t)| (p.to_string(), symbol_to_json(t))).collect();
    json!({"n": s.n(), "degree": s.degree(), "powers": powers})
}

pub fn series_from_json(v: &Value) -> Result<RawNuSeries> {
    let n = usize_field(v, "n")?;
    let degree = usize_field(v, "degree")?;
    let powers = field(v, "powers")?.as_object().ok_or_else(|| bad("powers must be an object"))?;
    let mut terms = Vec::new();
    for (p, t) in powers {
        let p: usize = p.parse().map_err(|_| bad(format!("power {p:?} is not an integer")))?;
        terms.push((p, symbol_from_json(t)?));
    }
    RawNuSeries::from_powers(n, degree, terms)
}

pub fn operator_to_json(op: &QuotientOperator) -> Value {
    let mut v = symbol_to_json(&op.matrix);
    v["K"] = json!(op.k);
    v
}

pub fn operator_from_json(v: &Value) -> Result<QuotientOperator> {
    let k = usize_field(v, "K")?;
    let matrix = symbol_from_json(v)?;
    if matrix.degree() != k {
        return Err(bad(format!("operator degree {} differs from K = {k}", matrix.degree())));
    }
    Ok(QuotientOperator { k, matrix })
}

fn cyclotomic_to_json(c: &Cyclotomic) -> Value {
    Value::Array(
        c.terms()
            .iter()
            .map(|(phase, amp)| json!({"amp": rational_to_json(amp), "phase": rational_to_json(phase)}))
            .collect(),
    )
}

fn cyclotomic_from_json(v: &Value) -> Result<Cyclotomic> {
    let mut c = Cyclotomic::zero();
    for t in array(v, "terms")? {
        c.add_term(rational_from_json(field(t, "amp")?)?, &rational_from_json(field(t, "phase")?)?);
    }
    Ok(c)
}

fn mode_map_to_json(coeffs: &BTreeMap<Vec<i64>, Cyclotomic>) -> Value {
    Value::Array(
        coeffs
            .iter()
            .map(|(k, c)| json!({"k": k, "terms": cyclotomic_to_json(c)}))
            .collect(),
    )
}

pub fn fourier_to_json(f: &FourierSum) -> Value {
    json!({
        "dim": f.data.dim(),
        "Lambda": f.data.lambda_matrix,
        "lambda": rational_to_json(&f.data.lambda),
        "coeffs": mode_map_to_json(f.coeffs()),
    })
}

pub fn fourier_from_json(v: &Value) -> Result<FourierSum> {
    let dim = usize_field(v, "dim")?;
    let lambda_matrix: Vec<Vec<i64>> = array(field(v, "Lambda")?, "Lambda")?
        .iter()
        .map(|r| int_list(r, "Lambda row"))
        .collect::<Result<_>>()?;
    if lambda_matrix.len() != dim {
        return Err(bad(format!("Lambda has {} rows, dim is {dim}", lambda_matrix.len())));
    }
    let data = MoyalData::new(lambda_matrix, rational_from_json(field(v, "lambda")?)?)?;
    let mut f = FourierSum::zero(data);
    for e in array(field(v, "coeffs")?, "coeffs")? {
        f.add_term(int_list(field(e, "k")?, "k")?, &cyclotomic_from_json(field(e, "terms")?)?)?;
    }
    Ok(f)
}

pub fn torus_quotient_to_json(q: &TorusQuotient) -> Value {
    json!({
        "K": q.k,
        "dim": q.data.dim(),
        "Lambda": q.data.lambda_matrix,
        "lambda": rational_to_json(&q.data.lambda),
        "coeffs": mode_map_to_json(q.coeffs()),
    })
}

pub fn disk_to_json(e: &DiskElement) -> Value {
    let coeffs: Vec<Value> = e
        .coeffs()
        .iter()
        .map(|((p, q), c)| {
            json!({
                "p": p,
                "q": q,
                "num": polynomial_to_json(c.numerator()),
                "den": polynomial_to_json(c.denominator()),
            })
        })
        .collect();
    json!({"coeffs": coeffs})
}

pub fn disk_from_json(v: &Value) -> Result<DiskElement> {
    let mut out = DiskElement::zero();
    for e in array(field(v, "coeffs")?, "coeffs")? {
        let c = ratfun_from_json(e)?;
        out.add_term(usize_field(e, "p")?, usize_field(e, "q")?, &c);
    }
    Ok(out)
}

/// Compact single-line canonical text.
pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("values built from maps and arrays serialize")
}
