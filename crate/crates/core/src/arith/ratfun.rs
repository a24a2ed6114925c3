use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{GaussRational, NuPolynomial, Rational};
use crate::error::{Error, Result};

/// A quotient of two ν-polynomials in canonical form: coprime numerator and
/// denominator, monic denominator. Structural equality is equality of
/// rational functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NuRationalFunction {
    num: NuPolynomial,
    den: NuPolynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Mul,
    Div,
}

impl NuRationalFunction {
    pub fn new(num: NuPolynomial, den: NuPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: NuPolynomial, den: NuPolynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = NuPolynomial::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0)
        };
        let lead = den.leading().unwrap().inv().unwrap();
        NuRationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    /// Re-normalizes; a no-op on values built through the public API.
    pub fn normalize(&self) -> Self {
        Self::normalized(self.num.clone(), self.den.clone())
    }

    pub fn zero() -> Self {
        NuRationalFunction {
            num: NuPolynomial::zero(),
            den: NuPolynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(NuPolynomial::one())
    }

    pub fn from_poly(p: NuPolynomial) -> Self {
        NuRationalFunction {
            num: p,
            den: NuPolynomial::one(),
        }
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::from_poly(NuPolynomial::constant(c))
    }

    pub fn numerator(&self) -> &NuPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &NuPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this function equals, if the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&NuPolynomial> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn eval(&self, alpha: &Rational) -> Result<GaussRational> {
        let a = GaussRational::real(alpha.clone());
        self.num.eval(&a).checked_div(&self.den.eval(&a))
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn reflect(&self) -> Self {
        Self::normalized(self.num.reflect(), self.den.reflect())
    }
}

impl<'a> Add<&'a NuRationalFunction> for &'a NuRationalFunction {
    type Output = NuRationalFunction;
    fn add(self, o: &NuRationalFunction) -> NuRationalFunction {
        if self.den == o.den {
            return NuRationalFunction::normalized(&self.num + &o.num, self.den.clone());
        }
        NuRationalFunction::normalized(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<'a> Sub<&'a NuRationalFunction> for &'a NuRationalFunction {
    type Output = NuRationalFunction;
    fn sub(self, o: &NuRationalFunction) -> NuRationalFunction {
        self + &(-o)
    }
}

impl<'a> Mul<&'a NuRationalFunction> for &'a NuRationalFunction {
    type Output = NuRationalFunction;
    fn mul(self, o: &NuRationalFunction) -> NuRationalFunction {
        NuRationalFunction::normalized(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Neg for &NuRationalFunction {
    type Output = NuRationalFunction;
    fn neg(self) -> NuRationalFunction {
        NuRationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl From<NuPolynomial> for NuRationalFunction {
    fn from(p: NuPolynomial) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for NuRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

pub fn ratfun_arith(
    a: &NuRationalFunction,
    b: &NuRationalFunction,
    op: RatOp,
) -> Result<NuRationalFunction> {
    match op {
        RatOp::Add => Ok(a + b),
        RatOp::Mul => Ok(a * b),
        RatOp::Div => a.checked_div(b),
    }
}
