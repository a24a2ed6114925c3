use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{GaussRational, Rational};
use crate::error::{Error, Result};

/// A polynomial in ν with Gaussian-rational coefficients, lowest degree first.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NuPolynomial {
    coeffs: Vec<GaussRational>,
}

impl NuPolynomial {
    pub fn new(mut coeffs: Vec<GaussRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        NuPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussRational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        NuPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::new(vec![c])
    }

    /// The variable ν itself.
    pub fn nu() -> Self {
        Self::monomial(GaussRational::one(), 1)
    }

    pub fn monomial(c: GaussRational, degree: usize) -> Self {
        let mut coeffs = vec![GaussRational::zero(); degree];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[GaussRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> GaussRational {
        self.coeffs.get(i).cloned().unwrap_or_else(GaussRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by ν^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![GaussRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        NuPolynomial { coeffs }
    }

    pub fn eval(&self, x: &GaussRational) -> GaussRational {
        let mut acc = GaussRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// p(ν) ↦ p(−ν).
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &GaussRational::from_int(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division over Q(i).
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dl = divisor.leading().ok_or(Error::DivisionByZero)?.inv()?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![GaussRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &dl;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = &c * d;
                rem[i + j] -= &t;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl From<GaussRational> for NuPolynomial {
    fn from(c: GaussRational) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a NuPolynomial> for &'a NuPolynomial {
    type Output = NuPolynomial;
    fn add(self, o: &NuPolynomial) -> NuPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        NuPolynomial::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a NuPolynomial> for &'a NuPolynomial {
    type Output = NuPolynomial;
    fn sub(self, o: &NuPolynomial) -> NuPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        NuPolynomial::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a NuPolynomial> for &'a NuPolynomial {
    type Output = NuPolynomial;
    fn mul(self, o: &NuPolynomial) -> NuPolynomial {
        if self.is_zero() || o.is_zero() {
            return NuPolynomial::zero();
        }
        let mut out = vec![GaussRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        NuPolynomial::new(out)
    }
}

impl Neg for &NuPolynomial {
    type Output = NuPolynomial;
    fn neg(self) -> NuPolynomial {
        NuPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for NuPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ν")?,
                _ => write!(f, "({c})ν^{i}")?,
            }
        }
        Ok(())
    }
}

/// ν^{(k)} = (1 − ν)(1 − 2ν)⋯(1 − (k−1)ν), with ν^{(0)} = ν^{(1)} = 1.
pub fn nu_pochhammer(k: usize) -> NuPolynomial {
    (1..k.max(1)).fold(NuPolynomial::one(), |acc, j| {
        &acc * &NuPolynomial::from_ints(&[1, -(j as i64)])
    })
}

/// (−ν)^{(k)} = (1 + ν)(1 + 2ν)⋯(1 + (k−1)ν).
pub fn nu_pochhammer_reflected(k: usize) -> NuPolynomial {
    nu_pochhammer(k).reflect()
}

pub fn poly_eval(p: &NuPolynomial, alpha: &Rational) -> GaussRational {
    p.eval(&GaussRational::real(alpha.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rational};
    use proptest::prelude::*;

    #[test]
    fn pochhammer_values() {
        assert_eq!(nu_pochhammer(0), NuPolynomial::one());
        assert_eq!(nu_pochhammer(1), NuPolynomial::one());
        assert_eq!(nu_pochhammer(2), NuPolynomial::from_ints(&[1, -1]));
        // (1 - ν)(1 - 2ν)
        assert_eq!(nu_pochhammer(3), NuPolynomial::from_ints(&[1, -3, 2]));
        for k in 1..8 {
            assert!(poly_eval(&nu_pochhammer(k + 1), &rational(1, k as i64)).is_zero());
            assert!(!poly_eval(&nu_pochhammer(k), &rational(1, k as i64)).is_zero());
        }
        assert_eq!(nu_pochhammer_reflected(3), NuPolynomial::from_ints(&[1, 3, 2]));
    }

    #[test]
    fn pochhammer_recurrence() {
        for k in 0..10 {
            let step = NuPolynomial::from_ints(&[1, -(k as i64)]);
            assert_eq!(nu_pochhammer(k + 1), &step * &nu_pochhammer(k), "k = {k}");
        }
    }

    #[test]
    fn evaluation() {
        assert!(poly_eval(&NuPolynomial::from_ints(&[1, -1]), &int(1)).is_zero());
        assert_eq!(
            poly_eval(&NuPolynomial::from_ints(&[0, 0, 1]), &rational(1, 2)),
            GaussRational::real(rational(1, 4))
        );
        assert_eq!(
            poly_eval(&nu_pochhammer(3), &rational(1, 3)),
            GaussRational::real(rational(2, 9))
        );
    }

    #[test]
    fn division_and_gcd() {
        let a = nu_pochhammer(4);
        let b = nu_pochhammer(3);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, NuPolynomial::from_ints(&[1, -3]));
        assert_eq!(NuPolynomial::gcd(&a, &b), b.monic());
        assert!(a.div_rem(&NuPolynomial::zero()).is_err());
        assert_eq!(
            NuPolynomial::gcd(&NuPolynomial::from_ints(&[1, 1]), &NuPolynomial::from_ints(&[1, -1])),
            NuPolynomial::one()
        );
    }

    fn small_poly() -> impl Strategy<Value = NuPolynomial> {
        prop::collection::vec((-4i64..5, -4i64..5), 0..4).prop_map(|v| {
            NuPolynomial::new(v.into_iter().map(|(a, b)| GaussRational::from_ints(a, b)).collect())
        })
    }

    proptest! {
        #[test]
        fn div_rem_reconstructs(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }
    }
}
