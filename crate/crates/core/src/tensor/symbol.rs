use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::bipoly::BiPoly;
use super::MultiIndex;
use crate::arith::{GaussRational, Rational};
use crate::error::{Error, Result};

/// An element of E_k: a symmetric coefficient tensor A ∈ B(H^(k)) stored at
/// sorted representatives.
///
/// The represented polynomial is
/// `σ̃(A)(z) = Σ_{sorted I,J} mult(I)·mult(J)·A_{I,J}·z̄^I z^J`
/// and the function on CP^n is `σ(A) = σ̃(A)/x^k`. Zero entries are never
/// stored, so two tensors of the same degree are equal iff their symbols are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolTensor {
    n: usize,
    k: usize,
    entries: BTreeMap<(MultiIndex, MultiIndex), GaussRational>,
}

impl SymbolTensor {
    pub fn zero(n: usize, k: usize) -> Self {
        SymbolTensor {
            n,
            k,
            entries: BTreeMap::new(),
        }
    }

    /// The constant function `c` at degree 0.
    pub fn constant(n: usize, c: GaussRational) -> Self {
        let mut t = Self::zero(n, 0);
        t.insert(MultiIndex::empty(), MultiIndex::empty(), c);
        t
    }

    /// Builds from entries already given at sorted representatives.
    pub fn from_entries<It>(n: usize, k: usize, entries: It) -> Result<Self>
    where
        It: IntoIterator<Item = (Vec<usize>, Vec<usize>, GaussRational)>,
    {
        let mut t = Self::zero(n, k);
        for (i, j, v) in entries {
            if i.len() != k || j.len() != k {
                return Err(Error::DimensionMismatch(format!(
                    "index lengths ({}, {}) for degree {k}",
                    i.len(),
                    j.len()
                )));
            }
            let (i, j) = (MultiIndex::new(i, n)?, MultiIndex::new(j, n)?);
            let cur = t.get(&i, &j);
            t.set(i, j, &cur + &v);
        }
        Ok(t)
    }

    /// A degree-1 tensor from an (n+1)×(n+1) matrix.
    pub fn from_matrix(m: &[Vec<GaussRational>]) -> Result<Self> {
        let size = m.len();
        if size < 2 || m.iter().any(|r| r.len() != size) {
            return Err(Error::DimensionMismatch(format!(
                "expected a square matrix of size ≥ 2, got {size} rows"
            )));
        }
        let mut t = Self::zero(size - 1, 1);
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.insert(MultiIndex::from_sorted(vec![i]), MultiIndex::from_sorted(vec![j]), v.clone());
            }
        }
        Ok(t)
    }

    /// The (n+1)×(n+1) matrix of a degree-1 tensor.
    pub fn to_matrix(&self) -> Option<Vec<Vec<GaussRational>>> {
        if self.k != 1 {
            return None;
        }
        let mut m = vec![vec![GaussRational::zero(); self.n + 1]; self.n + 1];
        for ((i, j), v) in &self.entries {
            m[i.entries()[0]][j.entries()[0]] = v.clone();
        }
        Some(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &BTreeMap<(MultiIndex, MultiIndex), GaussRational> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: &MultiIndex, j: &MultiIndex) -> GaussRational {
        self.entries
            .get(&(i.clone(), j.clone()))
            .cloned()
            .unwrap_or_else(GaussRational::zero)
    }

    fn set(&mut self, i: MultiIndex, j: MultiIndex, v: GaussRational) {
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    fn insert(&mut self, i: MultiIndex, j: MultiIndex, v: GaussRational) {
        if !v.is_zero() {
            self.entries.insert((i, j), v);
        }
    }

    pub(crate) fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(format!("n = {} vs n = {}", self.n, o.n)));
        }
        Ok(())
    }

    fn check_same_shape(&self, o: &Self) -> Result<()> {
        self.check_compatible(o)?;
        if self.k != o.k {
            return Err(Error::DimensionMismatch(format!(
                "degree {} vs degree {}",
                self.k, o.k
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same_shape(o)?;
        let mut out = self.clone();
        for ((i, j), v) in &o.entries {
            let cur = out.get(i, j);
            out.set(i.clone(), j.clone(), &cur + v);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    /// Sum of two symbols of possibly different degree, at the larger degree.
    pub fn add_embedded(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let d = self.k.max(o.k);
        self.embed_to(d).add(&o.embed_to(d))
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussRational::from_int(-1))
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        let mut out = Self::zero(self.n, self.k);
        if c.is_zero() {
            return out;
        }
        for (key, v) in &self.entries {
            out.entries.insert(key.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&GaussRational::real(c.clone()))
    }

    /// The symbol of the complex-conjugate function: conjugate transpose.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.n, self.k);
        for ((i, j), v) in &self.entries {
            out.entries.insert((j.clone(), i.clone()), v.conj());
        }
        out
    }

    /// σ̃(A) as an explicit polynomial.
    pub fn to_poly(&self) -> BiPoly {
        let mut p = BiPoly::zero(self.n);
        for ((i, j), v) in &self.entries {
            let w = i.multiplicity() * j.multiplicity();
            p.add_term((i.exponents(self.n), j.exponents(self.n)), &v.scale(&Rational::from_integer(w)));
        }
        p
    }

    /// Reads back a bihomogeneous polynomial of degree (k, k).
    pub fn from_poly(n: usize, k: usize, p: &BiPoly) -> Result<Self> {
        let mut t = Self::zero(n, k);
        for ((a, b), c) in p.terms() {
            let (i, j) = (MultiIndex::from_exponents(a), MultiIndex::from_exponents(b));
            if i.len() != k || j.len() != k {
                return Err(Error::InternalDegree(format!(
                    "monomial of degree ({}, {}) in a degree-{k} symbol",
                    i.len(),
                    j.len()
                )));
            }
            let w = i.multiplicity() * j.multiplicity();
            t.insert(i, j, c.scale(&Rational::new(BigInt::one(), w)));
        }
        Ok(t)
    }

    /// Re-encodes at degree `d ≥ k` by repeated [`embed`].
    pub fn embed_to(&self, d: usize) -> Self {
        assert!(d >= self.k, "cannot embed degree {} into degree {d}", self.k);
        let mut t = self.clone();
        while t.k < d {
            t = embed(&t);
        }
        t
    }

    /// The same function at the lowest degree that represents it.
    pub fn minimal(&self) -> Self {
        if self.is_zero() {
            return Self::zero(self.n, 0);
        }
        let mut t = self.clone();
        while t.k > 0 {
            match reduce_degree(&t) {
                Some(r) => t = r,
                None => break,
            }
        }
        t
    }

    /// Equality as functions on CP^n, regardless of representing degree.
    pub fn same_function(&self, o: &Self) -> bool {
        if self.n != o.n {
            return false;
        }
        let d = self.k.max(o.k);
        self.embed_to(d) == o.embed_to(d)
    }
}

impl fmt::Display for SymbolTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}, k={}]", self.n, self.k)?;
        for ((i, j), v) in &self.entries {
            write!(f, " {:?},{:?}:{}", i.entries(), j.entries(), v)?;
        }
        Ok(())
    }
}

/// Accumulates orbit sums of an unsymmetrized tensor and averages them onto
/// sorted representatives.
pub(crate) struct Symmetrizer {
    n: usize,
    k: usize,
    sums: HashMap<(MultiIndex, MultiIndex), GaussRational>,
}

impl Symmetrizer {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Symmetrizer {
            n,
            k,
            sums: HashMap::new(),
        }
    }

    /// Adds `v` for every one of `weight` full index tuples in the orbit of (i, j).
    pub(crate) fn add(&mut self, i: MultiIndex, j: MultiIndex, v: GaussRational) {
        if v.is_zero() {
            return;
        }
        let e = self.sums.entry((i, j)).or_insert_with(GaussRational::zero);
        *e += &v;
    }

    pub(crate) fn finish(self) -> SymbolTensor {
        let mut t = SymbolTensor::zero(self.n, self.k);
        for ((i, j), v) in self.sums {
            let w = i.multiplicity() * j.multiplicity();
            t.insert(i, j, v.scale(&Rational::new(BigInt::one(), w)));
        }
        t
    }
}

/// Averages a raw (not necessarily symmetric) tensor over permutations of its
/// upper and of its lower indices. Missing index pairs count as zero.
pub fn symmetrize<It>(raw: It, n: usize, k: usize) -> Result<SymbolTensor>
where
    It: IntoIterator<Item = ((Vec<usize>, Vec<usize>), GaussRational)>,
{
    let mut acc = Symmetrizer::new(n, k);
    for ((i, j), v) in raw {
        if i.len() != k || j.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "raw index lengths ({}, {}) for degree {k}",
                i.len(),
                j.len()
            )));
        }
        acc.add(MultiIndex::new(i, n)?, MultiIndex::new(j, n)?, v);
    }
    Ok(acc.finish())
}

/// σ(A)(π(z)) = σ̃(A)(z) / x^k.
pub fn eval_symbol(a: &SymbolTensor, z: &[GaussRational]) -> Result<GaussRational> {
    if z.len() != a.n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, expected {}",
            z.len(),
            a.n + 1
        )));
    }
    let x: Rational = z.iter().map(|c| c.norm_sqr()).sum();
    if x.is_zero() {
        return Err(Error::ZeroPoint);
    }
    let num = a.to_poly().eval(z);
    let xk = GaussRational::real(num_traits::pow(x, a.k));
    num.checked_div(&xk)
}

/// The tensor with σ̃ = x^k; the identity operator on H^(k).
pub fn identity_symbol(n: usize, k: usize) -> SymbolTensor {
    let mut t = SymbolTensor::zero(n, k);
    for i in MultiIndex::all(n, k) {
        let w = i.multiplicity();
        t.insert(i.clone(), i, GaussRational::real(Rational::new(BigInt::one(), w)));
    }
    t
}

/// σ(A)·σ(B) at degree k + l.
pub fn pointwise_mul(a: &SymbolTensor, b: &SymbolTensor) -> Result<SymbolTensor> {
    a.check_compatible(b)?;
    if a.k == 0 {
        return Ok(b.scale(&a.get(&MultiIndex::empty(), &MultiIndex::empty())));
    }
    if b.k == 0 {
        return Ok(a.scale(&b.get(&MultiIndex::empty(), &MultiIndex::empty())));
    }
    SymbolTensor::from_poly(a.n, a.k + b.k, &a.to_poly().mul(&b.to_poly()))
}

/// The same function one degree higher (σ̃ multiplied by x).
pub fn embed(a: &SymbolTensor) -> SymbolTensor {
    SymbolTensor::from_poly(a.n, a.k + 1, &a.to_poly().mul_x()).expect("bihomogeneous")
}

/// The preimage of `a` under [`embed`], if `a` lies in its image.
pub fn reduce_degree(a: &SymbolTensor) -> Option<SymbolTensor> {
    if a.k == 0 {
        return None;
    }
    let q = a.to_poly().div_x()?;
    Some(SymbolTensor::from_poly(a.n, a.k - 1, &q).expect("quotient is bihomogeneous"))
}
