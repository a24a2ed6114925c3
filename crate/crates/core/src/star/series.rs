use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::{GaussRational, NuPolynomial};
use crate::error::{Error, Result};
use crate::tensor::{embed, SymbolTensor};

/// A polynomial in ν whose coefficients are symbols, all held at one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawNuSeries {
    n: usize,
    degree: usize,
    powers: BTreeMap<usize, SymbolTensor>,
}

impl RawNuSeries {
    pub fn zero(n: usize, degree: usize) -> Self {
        RawNuSeries {
            n,
            degree,
            powers: BTreeMap::new(),
        }
    }

    /// Collects `(power, tensor)` pairs, embedding every tensor to the
    /// largest degree present (at least `degree`).
    pub fn from_powers<It>(n: usize, degree: usize, terms: It) -> Result<Self>
    where
        It: IntoIterator<Item = (usize, SymbolTensor)>,
    {
        let mut s = Self::zero(n, degree);
        for (p, t) in terms {
            s.add_term(p, &t)?;
        }
        Ok(s)
    }

    /// The ν-constant series `t`.
    pub fn constant(t: &SymbolTensor) -> Self {
        let mut s = Self::zero(t.n(), t.degree());
        s.add_term(0, t).expect("same n");
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn powers(&self) -> &BTreeMap<usize, SymbolTensor> {
        &self.powers
    }

    pub fn is_zero(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn max_power(&self) -> Option<usize> {
        self.powers.keys().next_back().copied()
    }

    /// The coefficient of ν^p, at the series degree.
    pub fn coeff(&self, p: usize) -> SymbolTensor {
        self.powers
            .get(&p)
            .cloned()
            .unwrap_or_else(|| SymbolTensor::zero(self.n, self.degree))
    }

    /// Adds `t·ν^p`, raising the series degree if `t` sits higher.
    pub fn add_term(&mut self, p: usize, t: &SymbolTensor) -> Result<()> {
        if t.n() != self.n {
            return Err(Error::DimensionMismatch(format!("n = {} vs n = {}", t.n(), self.n)));
        }
        if t.is_zero() {
            return Ok(());
        }
        if t.degree() > self.degree {
            *self = self.embed_to(t.degree());
        }
        let t = t.embed_to(self.degree);
        let sum = match self.powers.get(&p) {
            Some(cur) => cur.add(&t)?,
            None => t,
        };
        if sum.is_zero() {
            self.powers.remove(&p);
        } else {
            self.powers.insert(p, sum);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (p, t) in &o.powers {
            out.add_term(*p, t)?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&GaussRational::from_int(-1)))
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        if c.is_zero() {
            return out;
        }
        for (p, t) in &self.powers {
            out.powers.insert(*p, t.scale(c));
        }
        out
    }

    /// Multiplication by a polynomial in ν.
    pub fn mul_poly(&self, q: &NuPolynomial) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (i, c) in q.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (p, t) in &self.powers {
                out.add_term(p + i, &t.scale(c)).expect("same n");
            }
        }
        out
    }

    /// Division by ν; `None` unless the ν⁰ coefficient vanishes.
    pub fn div_nu(&self) -> Option<Self> {
        if self.powers.contains_key(&0) {
            return None;
        }
        let mut out = Self::zero(self.n, self.degree);
        for (p, t) in &self.powers {
            out.powers.insert(p - 1, t.clone());
        }
        Some(out)
    }

    pub fn embed_to(&self, d: usize) -> Self {
        let mut out = Self::zero(self.n, d.max(self.degree));
        for (p, t) in &self.powers {
            let mut t = t.clone();
            while t.degree() < out.degree {
                t = embed(&t);
            }
            out.powers.insert(*p, t);
        }
        out
    }

    /// Equality as ν-polynomials of functions, independent of the held degree.
    pub fn same_series(&self, o: &Self) -> bool {
        if self.n != o.n {
            return false;
        }
        let d = self.degree.max(o.degree);
        self.embed_to(d) == o.embed_to(d)
    }
}
