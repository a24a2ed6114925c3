//! Radial functions of x = z̄ⁱzⁱ under the Wick product, and the operator S
//! on powers of x.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{factorial, GaussRational, NuPolynomial, Rational};
use crate::error::{Error, Result};

/// Σ_j c_j(λ) x^j, with the λ-polynomials held as [`NuPolynomial`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RadialPolynomial {
    coeffs: BTreeMap<usize, NuPolynomial>,
}

impl RadialPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::x_power(0)
    }

    pub fn x_power(j: usize) -> Self {
        Self::term(j, NuPolynomial::one())
    }

    pub fn term(j: usize, c: NuPolynomial) -> Self {
        let mut p = Self::zero();
        p.add_term(j, &c);
        p
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, NuPolynomial> {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> NuPolynomial {
        self.coeffs.get(&j).cloned().unwrap_or_else(NuPolynomial::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, j: usize, c: &NuPolynomial) {
        let sum = &self.coeff(j) + c;
        if sum.is_zero() {
            self.coeffs.remove(&j);
        } else {
            self.coeffs.insert(j, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (j, c) in &o.coeffs {
            out.add_term(*j, c);
        }
        out
    }

    pub fn scale(&self, c: &NuPolynomial) -> Self {
        let mut out = Self::zero();
        for (j, v) in &self.coeffs {
            out.add_term(*j, &(v * c));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &o.coeffs {
                out.add_term(i + j, &(a * b));
            }
        }
        out
    }

    pub fn mul_x(&self) -> Self {
        self.mul(&Self::x_power(1))
    }

    /// d/dx.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (j, c) in &self.coeffs {
            if *j > 0 {
                out.add_term(j - 1, &c.scale(&GaussRational::from_int(*j as i64)));
            }
        }
        out
    }
}

impl fmt::Display for RadialPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (pos, (j, c)) in self.coeffs.iter().rev().enumerate() {
            if pos > 0 {
                f.write_str(" + ")?;
            }
            let c = c.to_string().replace('ν', "λ");
            match j {
                0 => write!(f, "[{c}]")?,
                1 => write!(f, "[{c}]x")?,
                _ => write!(f, "[{c}]x^{j}")?,
            }
        }
        Ok(())
    }
}

/// The image of a power of x under S or S⁻¹.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadialImage {
    Polynomial(RadialPolynomial),
    /// x^{−r} ∏_{k=1}^{r} (1 + kλ/x)^{−1}, left unexpanded.
    ReciprocalProduct { r: usize },
}

fn lambda_multiple(c: i64) -> NuPolynomial {
    NuPolynomial::from_ints(&[0, c])
}

/// Stirling numbers of the second kind S(r, j) for j = 0..=r.
fn stirling2_row(r: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for m in 1..=r {
        let mut next = vec![BigInt::zero(); m + 1];
        for j in 1..=m {
            let stay = if j < m { &row[j] * BigInt::from(j) } else { BigInt::zero() };
            next[j] = stay + &row[j - 1];
        }
        row = next;
    }
    row
}

/// S x^r = x^r ∏_{k=0}^{r−1}(1 − kλ/x) = x(x − λ)⋯(x − (r−1)λ) for r ≥ 0,
/// S x^{−r} = x^{−r} ∏_{k=1}^{r}(1 + kλ/x)^{−1}, and
/// S⁻¹ x^r = Σ_j S(r, j) λ^{r−j} x^j.
pub fn s_on_monomial(r: i64, inverse: bool) -> Result<RadialImage> {
    if r < 0 {
        if inverse {
            return Err(Error::Unsupported(
                "S⁻¹ on negative powers of x has no finite closed form".into(),
            ));
        }
        return Ok(RadialImage::ReciprocalProduct { r: r.unsigned_abs() as usize });
    }
    let r = r as usize;
    if inverse {
        let mut p = RadialPolynomial::zero();
        for (j, s) in stirling2_row(r).into_iter().enumerate() {
            if !s.is_zero() {
                p.add_term(j, &NuPolynomial::monomial(GaussRational::from_bigint(s), r - j));
            }
        }
        return Ok(RadialImage::Polynomial(p));
    }
    let mut p = RadialPolynomial::one();
    for k in 0..r {
        let factor = RadialPolynomial::x_power(1).add(&RadialPolynomial::term(0, lambda_multiple(-(k as i64))));
        p = p.mul(&factor);
    }
    Ok(RadialImage::Polynomial(p))
}

/// S or S⁻¹ applied to a radial polynomial, term by term.
pub fn apply_s(p: &RadialPolynomial, inverse: bool) -> RadialPolynomial {
    let mut out = RadialPolynomial::zero();
    for (j, c) in p.coeffs() {
        match s_on_monomial(*j as i64, inverse).expect("nonnegative power") {
            RadialImage::Polynomial(img) => out = out.add(&img.scale(c)),
            RadialImage::ReciprocalProduct { .. } => unreachable!("nonnegative power"),
        }
    }
    out
}

/// x ∗ p = x·p + λ·x·p′.
pub fn wick_x_times(p: &RadialPolynomial) -> RadialPolynomial {
    p.mul_x().add(&p.derivative().mul_x().scale(&lambda_multiple(1)))
}

/// The Wick power x^{∗m}.
pub fn wick_radial_power(m: usize) -> RadialPolynomial {
    (0..m).fold(RadialPolynomial::one(), |acc, _| wick_x_times(&acc))
}

/// The α^m coefficient of exp((x/λ)(e^{αλ} − 1)) for m = 0..=order, from the
/// exponent's series a_j = λ^{j−1} x / j! and e_m = (1/m) Σ_j j a_j e_{m−j}.
pub fn exponential_coefficients(order: usize) -> Vec<RadialPolynomial> {
    let a: Vec<RadialPolynomial> = (0..=order)
        .map(|j| {
            if j == 0 {
                return RadialPolynomial::zero();
            }
            let c = GaussRational::real(Rational::new(BigInt::one(), factorial(j)));
            RadialPolynomial::term(1, NuPolynomial::monomial(c, j - 1))
        })
        .collect();
    let mut e = vec![RadialPolynomial::one()];
    for m in 1..=order {
        let mut acc = RadialPolynomial::zero();
        for j in 1..=m {
            acc = acc.add(&a[j].mul(&e[m - j]).scale(&NuPolynomial::constant(GaussRational::from_int(j as i64))));
        }
        let inv = GaussRational::real(Rational::new(BigInt::one(), BigInt::from(m)));
        e.push(acc.scale(&NuPolynomial::constant(inv)));
    }
    e
}

/// Σ_{m ≤ order} α^m/m! x^{∗m} agrees with exp((x/λ)(e^{αλ} − 1)) order by order.
pub fn check_star_exponential(order: usize) -> bool {
    let expected = exponential_coefficients(order);
    (0..=order).all(|m| {
        let inv = GaussRational::real(Rational::new(BigInt::one(), factorial(m)));
        wick_radial_power(m).scale(&NuPolynomial::constant(inv)) == expected[m]
    })
}
