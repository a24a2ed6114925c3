//! The symbol algebra spanned by f_{p,q}(v) = v^p (v̄/(1−|v|²))^q on the
//! Poincaré disk.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{
    falling_factorial, factorial, nu_pochhammer_reflected, GaussRational, NuPolynomial,
    NuRationalFunction, Rational,
};
use crate::error::Result;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiskElement {
    coeffs: BTreeMap<(usize, usize), NuRationalFunction>,
}

impl DiskElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::basis(0, 0)
    }

    /// f_{p,q}.
    pub fn basis(p: usize, q: usize) -> Self {
        Self::term(p, q, NuRationalFunction::one())
    }

    pub fn term(p: usize, q: usize, c: NuRationalFunction) -> Self {
        let mut e = Self::zero();
        e.add_term(p, q, &c);
        e
    }

    pub fn coeffs(&self) -> &BTreeMap<(usize, usize), NuRationalFunction> {
        &self.coeffs
    }

    pub fn coeff(&self, p: usize, q: usize) -> NuRationalFunction {
        self.coeffs.get(&(p, q)).cloned().unwrap_or_else(NuRationalFunction::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, p: usize, q: usize, c: &NuRationalFunction) {
        let sum = &self.coeff(p, q) + c;
        if sum.is_zero() {
            self.coeffs.remove(&(p, q));
        } else {
            self.coeffs.insert((p, q), sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((p, q), c) in &o.coeffs {
            out.add_term(*p, *q, c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((p, q), c) in &o.coeffs {
            out.add_term(*p, *q, &-c);
        }
        out
    }

    pub fn scale(&self, c: &NuRationalFunction) -> Self {
        let mut out = Self::zero();
        for ((p, q), v) in &self.coeffs {
            out.add_term(*p, *q, &(v * c));
        }
        out
    }
}

impl fmt::Display for DiskElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (idx, ((p, q), c)) in self.coeffs.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·f[{p},{q}]")?;
        }
        Ok(())
    }
}

/// The coefficient of f_{p+r−m, q+s−m} in f_{p,q} ∗ f_{r,s}:
/// `ν^m/m! · (−ν)^{(q+s−m)}/((−ν)^{(q)}(−ν)^{(s)}) · q!/(q−m)! · r!/(r−m)!`.
pub fn disk_coefficient(q: usize, r: usize, s: usize, m: usize) -> NuRationalFunction {
    let comb = falling_factorial(q, m) * falling_factorial(r, m);
    let c = GaussRational::real(Rational::new(comb, factorial(m)));
    let num = &NuPolynomial::monomial(c, m) * &nu_pochhammer_reflected(q + s - m);
    let den = &nu_pochhammer_reflected(q) * &nu_pochhammer_reflected(s);
    NuRationalFunction::new(num, den).expect("reflected Pochhammer symbols are nonzero")
}

pub fn disk_basis_product(p: usize, q: usize, r: usize, s: usize) -> DiskElement {
    let mut out = DiskElement::zero();
    for m in 0..=q.min(r) {
        out.add_term(p + r - m, q + s - m, &disk_coefficient(q, r, s, m));
    }
    out
}

pub fn disk_product(f: &DiskElement, g: &DiskElement) -> DiskElement {
    let mut out = DiskElement::zero();
    for ((p, q), a) in &f.coeffs {
        for ((r, s), b) in &g.coeffs {
            let ab = a * b;
            for ((u, v), c) in &disk_basis_product(*p, *q, *r, *s).coeffs {
                out.add_term(*u, *v, &(&ab * c));
            }
        }
    }
    out
}

/// Builds an element from integer-coefficient numerator and denominator
/// lists, lowest degree first.
pub fn disk_term_from_ints(p: usize, q: usize, num: &[i64], den: &[i64]) -> Result<DiskElement> {
    let c = NuRationalFunction::new(NuPolynomial::from_ints(num), NuPolynomial::from_ints(den))?;
    Ok(DiskElement::term(p, q, c))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::nu_pochhammer;

    fn rf(num: &[i64], den: &[i64]) -> NuRationalFunction {
        NuRationalFunction::new(NuPolynomial::from_ints(num), NuPolynomial::from_ints(den)).unwrap()
    }

    #[test]
    fn small_products() {
        assert_eq!(disk_basis_product(0, 1, 1, 0), {
            let mut e = DiskElement::basis(1, 1);
            e.add_term(0, 0, &rf(&[0, 1], &[1]));
            e
        });
        for (p, r, s) in [(0, 0, 0), (2, 3, 1), (1, 0, 3)] {
            assert_eq!(disk_basis_product(p, 0, r, s), DiskElement::basis(p + r, s));
        }
    }

    #[test]
    fn unit_is_two_sided() {
        for p in 0..=3 {
            for q in 0..=3 {
                let f = DiskElement::basis(p, q);
                assert_eq!(disk_product(&DiskElement::unit(), &f), f);
                assert_eq!(disk_product(&f, &DiskElement::unit()), f);
            }
        }
    }

    #[test]
    fn associative_on_small_basis() {
        let idx: Vec<(usize, usize)> = (0..=2).flat_map(|p| (0..=2).map(move |q| (p, q))).collect();
        for &(p, q) in &idx {
            for &(r, s) in &idx {
                let fg = disk_basis_product(p, q, r, s);
                for &(t, u) in &idx {
                    let h = DiskElement::basis(t, u);
                    let l = disk_product(&fg, &h);
                    let rr = disk_product(&DiskElement::basis(p, q), &disk_basis_product(r, s, t, u));
                    assert_eq!(l, rr, "({p},{q}) ({r},{s}) ({t},{u})");
                }
            }
        }
    }

    /// A monomial c·(z⁰)^a (z¹)^b (z̄¹)^d with integer exponents.
    type Mono = (Rational, i64, i64, i64);

    fn pullback_times_y(p: usize, q: usize) -> Mono {
        // y^q π*f_{p,q} = (z¹/z⁰)^p (z⁰ z̄¹)^q
        (Rational::from_integer(1.into()), q as i64 - p as i64, p as i64, q as i64)
    }

    /// Derivative-side evaluation of the m-th term, read off as a multiple
    /// of f_{p+r−m, q+s−m}.
    fn literal_term(p: usize, q: usize, r: usize, s: usize, m: usize) -> Option<NuRationalFunction> {
        let (mut a, mut b) = (pullback_times_y(p, q), pullback_times_y(r, s));
        for _ in 0..m {
            if a.3 == 0 || b.2 == 0 {
                return None;
            }
            a = (&a.0 * Rational::from_integer(a.3.into()), a.1, a.2, a.3 - 1);
            b = (&b.0 * Rational::from_integer(b.2.into()), b.1, b.2 - 1, b.3);
        }
        let prod = (&a.0 * &b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3);
        let (pp, qq) = (p + r - m, q + s - m);
        // f_{pp,qq}·y^{qq} must be the same monomial
        assert_eq!((prod.1, prod.2, prod.3), (qq as i64 - pp as i64, pp as i64, qq as i64));
        // (−ν)^m (−1)^m = ν^m
        let c = GaussRational::real(prod.0 / Rational::from_integer(factorial(m)));
        let num = &NuPolynomial::monomial(c, m) * &nu_pochhammer(q + s - m).reflect();
        let den = &nu_pochhammer(q).reflect() * &nu_pochhammer(s).reflect();
        Some(NuRationalFunction::new(num, den).unwrap())
    }

    #[test]
    fn closed_form_matches_derivatives() {
        for p in 0..=3 {
            for q in 0..=3 {
                for r in 0..=3 {
                    for s in 0..=3 {
                        let mut expected = DiskElement::zero();
                        for m in 0..=(q + s) {
                            if let Some(c) = literal_term(p, q, r, s, m) {
                                expected.add_term(p + r - m, q + s - m, &c);
                            }
                        }
                        assert_eq!(disk_basis_product(p, q, r, s), expected);
                    }
                }
            }
        }
    }
}
