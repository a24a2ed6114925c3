//! Sessions of named values and evaluation of expressions over them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value as Json};

use wickstar::arith::{format_rational, GaussRational, NuPolynomial, NuRationalFunction, Rational};
use wickstar::json::{
    disk_from_json, disk_to_json, fourier_from_json, fourier_to_json, matrix_from_json, operator_to_json,
    polynomial_to_json, rational_to_json, series_to_json, star_element_from_json, star_element_to_json,
    symbol_from_json, symbol_to_json,
};
use wickstar::models::disk::{disk_product, DiskElement};
use wickstar::models::torus::{moyal_product, Cyclotomic, FourierSum};
use wickstar::quotient::{quotient_map, star_at, substitute, AlphaValue, QuotientOperator};
use wickstar::star::{star_u, StarElement};
use wickstar::tensor::{pointwise_mul, SymbolTensor};

use crate::expr::{Expr, ScalarLit};

#[derive(Debug)]
pub enum EvalError {
    Unbound(String),
    Type(String),
    Math(wickstar::Error),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Unbound(name) => write!(f, "unbound identifier {name:?}"),
            EvalError::Type(msg) => write!(f, "type error: {msg}"),
            EvalError::Math(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<wickstar::Error> for EvalError {
    fn from(e: wickstar::Error) -> Self {
        EvalError::Math(e)
    }
}

type Result<T> = std::result::Result<T, EvalError>;

fn type_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(EvalError::Type(msg.into()))
}

/// A value a session can hold under a name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Matrix(Vec<Vec<GaussRational>>),
    Symbol(SymbolTensor),
    Element(StarElement),
    Fourier(FourierSum),
    Disk(DiskElement),
}

impl Binding {
    /// `{"matrix": …}`, `{"symbol": …}`, `{"element": …}`, `{"fourier": …}`,
    /// `{"disk": …}`, or a bare array of rows for a matrix.
    pub fn from_json(v: &Json) -> std::result::Result<Self, wickstar::Error> {
        if v.is_array() {
            return Ok(Binding::Matrix(matrix_from_json(v)?));
        }
        let obj = v
            .as_object()
            .filter(|o| o.len() == 1)
            .ok_or_else(|| wickstar::Error::Json("a binding is an object with exactly one kind key".into()))?;
        let (kind, body) = obj.iter().next().expect("one entry");
        Ok(match kind.as_str() {
            "matrix" => Binding::Matrix(matrix_from_json(body)?),
            "symbol" => Binding::Symbol(symbol_from_json(body)?),
            "element" => Binding::Element(star_element_from_json(body)?),
            "fourier" => Binding::Fourier(fourier_from_json(body)?),
            "disk" => Binding::Disk(disk_from_json(body)?),
            other => return Err(wickstar::Error::Json(format!("unknown binding kind {other:?}"))),
        })
    }

    fn n(&self) -> Option<usize> {
        match self {
            Binding::Matrix(m) => Some(m.len() - 1),
            Binding::Symbol(s) => Some(s.n()),
            Binding::Element(e) => Some(e.n()),
            Binding::Fourier(_) | Binding::Disk(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    /// Highest level tried when testing membership in U.
    pub level_bound: usize,
    /// Highest α-order for the star-exponential check.
    pub order_bound: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0,
            level_bound: 6,
            order_bound: 8,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Session {
    pub bindings: BTreeMap<String, Binding>,
    pub n: Option<usize>,
    pub config: Config,
}

const RESERVED: [&str; 6] = ["sigma", "subst", "quot", "nu", "unit", "i"];

impl Session {
    /// Reads `{"n"?, "seed"?, "level_bound"?, "order_bound"?, "bindings": {name: binding}}`.
    pub fn from_json(v: &Json) -> std::result::Result<Self, wickstar::Error> {
        let mut s = Session::default();
        let num = |key: &str| v.get(key).and_then(Json::as_u64);
        if let Some(seed) = num("seed") {
            s.config.seed = seed;
        }
        if let Some(b) = num("level_bound") {
            s.config.level_bound = b as usize;
        }
        if let Some(b) = num("order_bound") {
            s.config.order_bound = b as usize;
        }
        if let Some(n) = num("n") {
            s.n = Some(n as usize);
        }
        if let Some(b) = v.get("bindings") {
            let b = b
                .as_object()
                .ok_or_else(|| wickstar::Error::Json("bindings must be an object".into()))?;
            for (name, body) in b {
                s.bind(name, Binding::from_json(body)?)?;
            }
        }
        Ok(s)
    }

    pub fn bind(&mut self, name: &str, b: Binding) -> std::result::Result<(), wickstar::Error> {
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || RESERVED.contains(&name) {
            return Err(wickstar::Error::Parse(format!("{name:?} cannot be used as an identifier")));
        }
        if self.bindings.contains_key(name) {
            return Err(wickstar::Error::Parse(format!("{name:?} is bound twice")));
        }
        if let Some(m) = b.n() {
            match self.n {
                Some(n) if n != m => {
                    return Err(wickstar::Error::DimensionMismatch(format!("{name:?} has n = {m}, session has n = {n}")))
                }
                _ => self.n = Some(m),
            }
        }
        self.bindings.insert(name.to_string(), b);
        Ok(())
    }

    pub fn evaluate(&self, e: &Expr) -> Result<Val> {
        Evaluator { s: self }.eval(e)
    }

    /// The canonical output document for an expression.
    pub fn evaluate_to_json(&self, e: &Expr) -> Result<Json> {
        let v = self.evaluate(e)?;
        let mut out = v.to_json();
        out["expr"] = json!(e.to_string());
        out["seed"] = json!(self.config.seed);
        Ok(out)
    }
}

/// Results of evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Val {
    /// A polynomial in ν times the unit; carries no n.
    Scalar(NuPolynomial),
    /// A ν-free symbol. It enters the star algebra through f ↦ ν^{(k)} f.
    Symbol(SymbolTensor),
    Element(StarElement),
    /// A function in the algebra at a fixed value of ν.
    Function { alpha: Rational, symbol: SymbolTensor },
    Operator(QuotientOperator),
    Fourier(FourierSum),
    Disk(DiskElement),
}

impl Val {
    fn kind(&self) -> &'static str {
        match self {
            Val::Scalar(_) => "scalar",
            Val::Symbol(_) => "symbol",
            Val::Element(_) => "element",
            Val::Function { .. } => "function",
            Val::Operator(_) => "operator",
            Val::Fourier(_) => "fourier",
            Val::Disk(_) => "disk",
        }
    }

    pub fn to_json(&self) -> Json {
        let body = match self {
            Val::Scalar(p) => polynomial_to_json(p),
            Val::Symbol(s) => symbol_to_json(s),
            Val::Element(e) => {
                let m = e.minimized();
                return json!({
                    "type": "element",
                    "value": star_element_to_json(&m),
                    "expansion": series_to_json(&m.expand()),
                });
            }
            Val::Function { alpha, symbol } => {
                return json!({"type": "function", "alpha": rational_to_json(alpha), "value": symbol_to_json(symbol)});
            }
            Val::Operator(op) => operator_to_json(op),
            Val::Fourier(f) => fourier_to_json(f),
            Val::Disk(d) => disk_to_json(d),
        };
        json!({"type": self.kind(), "value": body})
    }
}

fn scalar_value(s: &ScalarLit) -> GaussRational {
    if s.imaginary {
        GaussRational::new(Rational::zero(), s.value.clone())
    } else {
        GaussRational::real(s.value.clone())
    }
}

fn as_constant(p: &NuPolynomial, what: &str) -> Result<GaussRational> {
    match p.degree() {
        None => Ok(GaussRational::zero()),
        Some(0) => Ok(p.coeff(0)),
        _ => type_err(format!("{what} cannot be multiplied by a polynomial in ν")),
    }
}

fn scalar_element(n: usize, p: &NuPolynomial) -> StarElement {
    let mut out = StarElement::zero(n);
    for (j, c) in p.coeffs().iter().enumerate() {
        let mut t = StarElement::constant(n, c.clone());
        for _ in 0..j {
            t = t.shift_nu();
        }
        out = out.add(&t).expect("same n");
    }
    out
}

struct Evaluator<'a> {
    s: &'a Session,
}

impl Evaluator<'_> {
    fn n_for(&self, other: Option<usize>) -> Result<usize> {
        other.or(self.s.n).ok_or_else(|| {
            EvalError::Type("cannot infer n for a scalar in the star algebra; bind a matrix or pass --n".into())
        })
    }

    /// Anything that lives in the structured algebra, as an element.
    fn element(&self, v: &Val, n_hint: Option<usize>) -> Result<StarElement> {
        match v {
            Val::Scalar(p) => Ok(scalar_element(self.n_for(n_hint)?, p)),
            Val::Symbol(f) => Ok(StarElement::lift(f)),
            Val::Element(e) => Ok(e.clone()),
            other => type_err(format!("a {} is not an element of the star algebra", other.kind())),
        }
    }

    fn n_of(v: &Val) -> Option<usize> {
        match v {
            Val::Symbol(f) => Some(f.n()),
            Val::Element(e) => Some(e.n()),
            Val::Function { symbol, .. } => Some(symbol.n()),
            Val::Operator(op) => Some(op.matrix.n()),
            _ => None,
        }
    }

    fn lookup(&self, name: &str) -> Result<&Binding> {
        self.s.bindings.get(name).ok_or_else(|| EvalError::Unbound(name.into()))
    }

    fn eval(&self, e: &Expr) -> Result<Val> {
        match e {
            Expr::Ident(name) => Ok(match self.lookup(name)? {
                Binding::Matrix(_) => return type_err(format!("{name:?} is a matrix; write sigma({name})")),
                Binding::Symbol(f) => Val::Symbol(f.clone()),
                Binding::Element(x) => Val::Element(x.clone()),
                Binding::Fourier(f) => Val::Fourier(f.clone()),
                Binding::Disk(d) => Val::Disk(d.clone()),
            }),
            Expr::Sigma(name) => match self.lookup(name)? {
                Binding::Matrix(m) => Ok(Val::Symbol(SymbolTensor::from_matrix(m)?)),
                Binding::Symbol(f) => Ok(Val::Symbol(f.clone())),
                _ => type_err(format!("sigma({name}) needs a matrix or symbol")),
            },
            Expr::Scalar(s) => Ok(Val::Scalar(NuPolynomial::constant(scalar_value(s)))),
            Expr::Nu => Ok(Val::Scalar(NuPolynomial::nu())),
            Expr::Unit => Ok(Val::Scalar(NuPolynomial::one())),
            Expr::Neg(a) => self.scale(&self.eval(a)?, &NuPolynomial::constant(GaussRational::from_int(-1))),
            Expr::Add(a, b) => self.add(&self.eval(a)?, &self.eval(b)?),
            Expr::Sub(a, b) => {
                let nb = self.scale(&self.eval(b)?, &NuPolynomial::constant(GaussRational::from_int(-1)))?;
                self.add(&self.eval(a)?, &nb)
            }
            Expr::Star(a, b) => self.star(&self.eval(a)?, &self.eval(b)?),
            Expr::Pointwise(a, b) => self.pointwise(&self.eval(a)?, &self.eval(b)?),
            Expr::Power(a, m) => {
                let base = self.eval(a)?;
                let mut acc = self.unit_like(&base)?;
                for _ in 0..*m {
                    acc = self.star(&acc, &base)?;
                }
                Ok(acc)
            }
            Expr::Subst(alpha, a) => {
                let av = AlphaValue::new(alpha.clone())?;
                match self.eval(a)? {
                    Val::Scalar(p) => Ok(Val::Scalar(NuPolynomial::constant(p.eval(&GaussRational::real(alpha.clone()))))),
                    v @ (Val::Symbol(_) | Val::Element(_)) => {
                        let e = self.element(&v, None)?;
                        Ok(Val::Function {
                            alpha: alpha.clone(),
                            symbol: substitute(&e, &av),
                        })
                    }
                    other => type_err(format!("subst applies to polynomials in ν, not to a {}", other.kind())),
                }
            }
            Expr::Quot(k, a) => {
                let v = self.eval(a)?;
                match v {
                    Val::Scalar(_) | Val::Symbol(_) | Val::Element(_) => {
                        let e = self.element(&v, None)?;
                        Ok(Val::Operator(quotient_map(&e, *k)?))
                    }
                    Val::Operator(op) if op.k == *k => Ok(Val::Operator(op)),
                    other => type_err(format!("quot applies to elements of the star algebra, not to a {}", other.kind())),
                }
            }
        }
    }

    fn unit_like(&self, base: &Val) -> Result<Val> {
        Ok(match base {
            Val::Scalar(_) | Val::Symbol(_) | Val::Element(_) => Val::Scalar(NuPolynomial::one()),
            Val::Function { alpha, symbol } => Val::Function {
                alpha: alpha.clone(),
                symbol: SymbolTensor::constant(symbol.n(), GaussRational::from_int(1)),
            },
            Val::Operator(op) => Val::Operator(QuotientOperator::identity(op.matrix.n(), op.k)),
            Val::Fourier(f) => Val::Fourier(FourierSum::unit(f.data.clone())),
            Val::Disk(_) => Val::Disk(DiskElement::unit()),
        })
    }

    fn scale(&self, v: &Val, p: &NuPolynomial) -> Result<Val> {
        Ok(match v {
            Val::Scalar(q) => Val::Scalar(p * q),
            Val::Symbol(f) => match p.degree() {
                None | Some(0) => Val::Symbol(f.scale(&as_constant(p, "a symbol")?)),
                _ => Val::Element(star_u(&scalar_element(f.n(), p), &StarElement::lift(f))?),
            },
            Val::Element(e) => Val::Element(star_u(&scalar_element(e.n(), p), e)?),
            Val::Function { alpha, symbol } => Val::Function {
                alpha: alpha.clone(),
                symbol: symbol.scale(&p.eval(&GaussRational::real(alpha.clone()))),
            },
            Val::Operator(op) => {
                let at = Rational::new(1.into(), op.k.into());
                Val::Operator(QuotientOperator {
                    k: op.k,
                    matrix: op.matrix.scale(&p.eval(&GaussRational::real(at))),
                })
            }
            Val::Fourier(f) => Val::Fourier(f.scale(&Cyclotomic::from_gauss(&as_constant(p, "a Fourier sum")?))),
            Val::Disk(d) => Val::Disk(d.scale(&NuRationalFunction::from_poly(p.clone()))),
        })
    }

    fn star(&self, a: &Val, b: &Val) -> Result<Val> {
        match (a, b) {
            (Val::Scalar(p), Val::Scalar(q)) => Ok(Val::Scalar(p * q)),
            (Val::Scalar(p), v) | (v, Val::Scalar(p)) => self.scale(v, p),
            (Val::Symbol(_) | Val::Element(_), Val::Symbol(_) | Val::Element(_)) => {
                let (x, y) = (self.element(a, None)?, self.element(b, None)?);
                Ok(Val::Element(star_u(&x, &y)?))
            }
            (Val::Function { alpha: s, symbol: f }, Val::Function { alpha: t, symbol: g }) => {
                if s != t {
                    return type_err(format!(
                        "functions at ν = {} and ν = {} cannot be multiplied",
                        format_rational(s),
                        format_rational(t)
                    ));
                }
                Ok(Val::Function {
                    alpha: s.clone(),
                    symbol: star_at(f, g, &AlphaValue::new(s.clone())?)?,
                })
            }
            (Val::Operator(x), Val::Operator(y)) if x.k == y.k => Ok(Val::Operator(x.compose(y)?)),
            (Val::Operator(x), v @ (Val::Symbol(_) | Val::Element(_))) => {
                Ok(Val::Operator(x.compose(&quotient_map(&self.element(v, None)?, x.k)?)?))
            }
            (v @ (Val::Symbol(_) | Val::Element(_)), Val::Operator(y)) => {
                Ok(Val::Operator(quotient_map(&self.element(v, None)?, y.k)?.compose(y)?))
            }
            (Val::Fourier(f), Val::Fourier(g)) => Ok(Val::Fourier(moyal_product(f, g)?)),
            (Val::Disk(f), Val::Disk(g)) => Ok(Val::Disk(disk_product(f, g))),
            _ => type_err(format!("no star product between a {} and a {}", a.kind(), b.kind())),
        }
    }

    fn pointwise(&self, a: &Val, b: &Val) -> Result<Val> {
        match (a, b) {
            (Val::Scalar(p), Val::Scalar(q)) => Ok(Val::Scalar(p * q)),
            (Val::Scalar(p), v) | (v, Val::Scalar(p)) => self.scale(v, p),
            (Val::Symbol(f), Val::Symbol(g)) => Ok(Val::Symbol(pointwise_mul(f, g)?)),
            (Val::Function { alpha: s, symbol: f }, Val::Function { alpha: t, symbol: g }) if s == t => {
                Ok(Val::Function {
                    alpha: s.clone(),
                    symbol: pointwise_mul(f, g)?,
                })
            }
            _ => type_err(format!(
                "the pointwise product needs two ν-free symbols or two functions at one ν, got a {} and a {}",
                a.kind(),
                b.kind()
            )),
        }
    }

    fn add(&self, a: &Val, b: &Val) -> Result<Val> {
        match (a, b) {
            (Val::Scalar(p), Val::Scalar(q)) => Ok(Val::Scalar(p + q)),
            (Val::Symbol(f), Val::Symbol(g)) => Ok(Val::Symbol(f.add_embedded(g)?)),
            (Val::Scalar(p), Val::Symbol(f)) | (Val::Symbol(f), Val::Scalar(p)) if p.degree().unwrap_or(0) == 0 => {
                let c = SymbolTensor::constant(f.n(), as_constant(p, "a symbol")?);
                Ok(Val::Symbol(f.add_embedded(&c)?))
            }
            (Val::Scalar(_) | Val::Symbol(_) | Val::Element(_), Val::Scalar(_) | Val::Symbol(_) | Val::Element(_)) => {
                let hint = Self::n_of(a).or(Self::n_of(b));
                Ok(Val::Element(self.element(a, hint)?.add(&self.element(b, hint)?)?))
            }
            (Val::Function { alpha: s, symbol: f }, Val::Function { alpha: t, symbol: g }) if s == t => {
                Ok(Val::Function {
                    alpha: s.clone(),
                    symbol: f.add_embedded(g)?,
                })
            }
            (Val::Scalar(p), Val::Function { alpha, symbol }) | (Val::Function { alpha, symbol }, Val::Scalar(p)) => {
                let c = SymbolTensor::constant(symbol.n(), p.eval(&GaussRational::real(alpha.clone())));
                Ok(Val::Function {
                    alpha: alpha.clone(),
                    symbol: symbol.add_embedded(&c)?,
                })
            }
            (Val::Operator(x), Val::Operator(y)) if x.k == y.k => Ok(Val::Operator(QuotientOperator {
                k: x.k,
                matrix: x.matrix.add(&y.matrix)?,
            })),
            (Val::Fourier(f), Val::Fourier(g)) => Ok(Val::Fourier(f.add(g)?)),
            (Val::Disk(f), Val::Disk(g)) => Ok(Val::Disk(f.add(g))),
            _ => type_err(format!("cannot add a {} and a {}", a.kind(), b.kind())),
        }
    }
}
