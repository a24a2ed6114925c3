//! Sparse polynomials in the 2(n+1) variables z̄⁰…z̄ⁿ, z⁰…zⁿ.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::GaussRational;

/// Exponents of (z̄, z).
pub type Monomial = (Vec<u32>, Vec<u32>);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    pub(crate) n: usize,
    pub(crate) terms: BTreeMap<Monomial, GaussRational>,
}

impl BiPoly {
    pub fn zero(n: usize) -> Self {
        BiPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// x = z̄ⁱzⁱ.
    pub fn x(n: usize) -> Self {
        let mut p = Self::zero(n);
        for i in 0..=n {
            let mut e = vec![0; n + 1];
            e[i] = 1;
            p.add_term((e.clone(), e), &GaussRational::from_int(1));
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, GaussRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> BiPoly {
        let mut out = BiPoly::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), &(v * c));
        }
        out
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = (
                    ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect(),
                    ma.1.iter().zip(&mb.1).map(|(a, b)| a + b).collect(),
                );
                out.add_term(m, &(ca * cb));
            }
        }
        out
    }

    /// ∂/∂zⁱ.
    pub fn d_z(&self, i: usize) -> BiPoly {
        let mut out = BiPoly::zero(self.n);
        for ((a, b), c) in &self.terms {
            if b[i] == 0 {
                continue;
            }
            let mut b2 = b.clone();
            b2[i] -= 1;
            out.add_term((a.clone(), b2), &(c * &GaussRational::from_int(b[i] as i64)));
        }
        out
    }

    /// ∂/∂z̄ⁱ.
    pub fn d_zbar(&self, i: usize) -> BiPoly {
        let mut out = BiPoly::zero(self.n);
        for ((a, b), c) in &self.terms {
            if a[i] == 0 {
                continue;
            }
            let mut a2 = a.clone();
            a2[i] -= 1;
            out.add_term((a2, b.clone()), &(c * &GaussRational::from_int(a[i] as i64)));
        }
        out
    }

    /// Multiplication by x.
    pub fn mul_x(&self) -> BiPoly {
        let mut out = BiPoly::zero(self.n);
        for ((a, b), c) in &self.terms {
            for i in 0..=self.n {
                let (mut a2, mut b2) = (a.clone(), b.clone());
                a2[i] += 1;
                b2[i] += 1;
                out.add_term((a2, b2), c);
            }
        }
        out
    }

    /// Exact division by x, or `None` if x does not divide.
    ///
    /// Division with respect to the lexicographic order z̄⁰ > … > z̄ⁿ > z⁰ > … > zⁿ,
    /// under which x has leading term z̄⁰z⁰; a single divisor is its own
    /// Gröbner basis, so a nonzero remainder means non-divisibility.
    pub fn div_x(&self) -> Option<BiPoly> {
        let mut rem = self.clone();
        let mut quot = BiPoly::zero(self.n);
        while let Some(((a, b), c)) = rem.terms.last_key_value() {
            if a[0] == 0 || b[0] == 0 {
                return None;
            }
            let (mut a2, mut b2) = (a.clone(), b.clone());
            a2[0] -= 1;
            b2[0] -= 1;
            let c = c.clone();
            let neg = -&c;
            for i in 0..=self.n {
                let (mut a3, mut b3) = (a2.clone(), b2.clone());
                a3[i] += 1;
                b3[i] += 1;
                rem.add_term((a3, b3), &neg);
            }
            quot.add_term((a2, b2), &c);
        }
        Some(quot)
    }

    /// Evaluates at a point, with z̄ the componentwise conjugate of z.
    pub fn eval(&self, z: &[GaussRational]) -> GaussRational {
        let zbar: Vec<GaussRational> = z.iter().map(|c| c.conj()).collect();
        let mut acc = GaussRational::zero();
        for ((a, b), c) in &self.terms {
            let mut t = c.clone();
            for i in 0..=self.n {
                t = &t * &zbar[i].pow(a[i] as usize);
                t = &t * &z[i].pow(b[i] as usize);
            }
            acc += &t;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_division() {
        let x = BiPoly::x(2);
        let p = x.mul(&x).mul_x();
        assert_eq!(p.div_x().unwrap(), x.mul(&x));
        assert_eq!(x.div_x().unwrap().terms.len(), 1);
        // |z0|^2 alone is not divisible by x
        let mut q = BiPoly::zero(2);
        q.add_term((vec![1, 0, 0], vec![1, 0, 0]), &GaussRational::from_int(1));
        assert!(q.div_x().is_none());
    }

    #[test]
    fn derivatives() {
        let x = BiPoly::x(1);
        let x2 = x.mul(&x);
        // ∂x²/∂z⁰ = 2 x z̄⁰
        let d = x2.d_z(0);
        let mut zb0 = BiPoly::zero(1);
        zb0.add_term((vec![1, 0], vec![0, 0]), &GaussRational::from_int(2));
        assert_eq!(d, x.mul(&zb0));
    }
}
