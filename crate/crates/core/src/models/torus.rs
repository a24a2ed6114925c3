//! Fourier modes on the 2n-torus under the Moyal product, and the finite
//! quotient at λ = 1/K.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{rank, GaussRational, NuPolynomial, Rational};
use crate::error::{Error, Result};

/// Σ c·e^{2πiθ} with rational amplitudes c and rational phases θ.
///
/// Phases are normalized into [0, 1/2) using e^{2πi(θ+1/2)} = −e^{2πiθ}.
/// The representation is not unique (e.g. 1 + ω + ω² = 0); use
/// [`Cyclotomic::is_zero`] and [`Cyclotomic::same_value`] for equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cyclotomic {
    terms: BTreeMap<Rational, Rational>,
}

fn reduce_phase(theta: &Rational) -> (Rational, bool) {
    let t = theta - theta.floor();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if t >= half {
        (t - half, true)
    } else {
        (t, false)
    }
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_phase(Rational::one(), Rational::zero())
    }

    /// amp·e^{2πiθ}.
    pub fn from_phase(amp: Rational, theta: Rational) -> Self {
        let mut c = Self::zero();
        c.add_term(amp, &theta);
        c
    }

    /// a + bi as a·e^{0} + b·e^{2πi/4}.
    pub fn from_gauss(c: &GaussRational) -> Self {
        let mut out = Self::zero();
        out.add_term(c.re.clone(), &Rational::zero());
        out.add_term(c.im.clone(), &Rational::new(BigInt::one(), BigInt::from(4)));
        out
    }

    /// (phase, amplitude) pairs of the stored form.
    pub fn terms(&self) -> &BTreeMap<Rational, Rational> {
        &self.terms
    }

    pub fn add_term(&mut self, amp: Rational, theta: &Rational) {
        let (t, flip) = reduce_phase(theta);
        let amp = if flip { -amp } else { amp };
        let sum = self.terms.get(&t).cloned().unwrap_or_else(Rational::zero) + amp;
        if sum.is_zero() {
            self.terms.remove(&t);
        } else {
            self.terms.insert(t, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (t, a) in &o.terms {
            out.add_term(a.clone(), t);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            terms: self.terms.iter().map(|(t, a)| (t.clone(), -a)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (t1, a1) in &self.terms {
            for (t2, a2) in &o.terms {
                out.add_term(a1 * a2, &(t1 + t2));
            }
        }
        out
    }

    /// Multiplication by e^{2πiθ}.
    pub fn rotate(&self, theta: &Rational) -> Self {
        let mut out = Self::zero();
        for (t, a) in &self.terms {
            out.add_term(a.clone(), &(t + theta));
        }
        out
    }

    /// Exact test: reduces Σ c ζ^{θN} modulo the N-th cyclotomic polynomial.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        let order = self
            .terms
            .keys()
            .fold(BigInt::from(2), |acc, t| acc.lcm(t.denom()))
            .to_usize()
            .expect("phase denominators are small");
        let mut coeffs = vec![GaussRational::zero(); order];
        for (t, a) in &self.terms {
            let e = (t * Rational::from_integer(BigInt::from(order))).to_integer().to_usize().expect("in range");
            coeffs[e] += &GaussRational::real(a.clone());
        }
        let p = NuPolynomial::new(coeffs);
        let (_, rem) = p.div_rem(&cyclotomic_polynomial(order)).expect("nonzero divisor");
        rem.is_zero()
    }

    pub fn same_value(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

/// Φ_N, the minimal polynomial of a primitive N-th root of unity.
pub fn cyclotomic_polynomial(order: usize) -> NuPolynomial {
    let mut p = &NuPolynomial::monomial(GaussRational::one(), order) - &NuPolynomial::one();
    for d in 1..order {
        if order.is_multiple_of(d) {
            p = p.div_rem(&cyclotomic_polynomial(d)).expect("nonzero divisor").0;
        }
    }
    p
}

/// The Moyal data shared by all factors: Λ and λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoyalData {
    pub lambda_matrix: Vec<Vec<i64>>,
    pub lambda: Rational,
}

impl MoyalData {
    pub fn new(lambda_matrix: Vec<Vec<i64>>, lambda: Rational) -> Result<Self> {
        let dim = lambda_matrix.len();
        if dim == 0 || !dim.is_multiple_of(2) || lambda_matrix.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidTorus(format!("Λ must be a square matrix of even size, got {dim} rows")));
        }
        let rows: Vec<Vec<GaussRational>> = lambda_matrix
            .iter()
            .map(|r| r.iter().map(|&v| GaussRational::from_int(v)).collect())
            .collect();
        if rank(&rows) != dim {
            return Err(Error::InvalidTorus("Λ is degenerate".into()));
        }
        Ok(MoyalData { lambda_matrix, lambda })
    }

    /// The standard symplectic matrix on Z^{2n}.
    pub fn standard(n: usize, lambda: Rational) -> Self {
        let dim = 2 * n;
        let mut m = vec![vec![0i64; dim]; dim];
        for i in 0..n {
            m[i][n + i] = 1;
            m[n + i][i] = -1;
        }
        MoyalData { lambda_matrix: m, lambda }
    }

    pub fn dim(&self) -> usize {
        self.lambda_matrix.len()
    }

    fn pairing(&self, k: &[i64], kp: &[i64]) -> BigInt {
        let mut s = BigInt::zero();
        for (i, row) in self.lambda_matrix.iter().enumerate() {
            for (j, &l) in row.iter().enumerate() {
                s += BigInt::from(l) * k[i] * kp[j];
            }
        }
        s
    }
}

/// T_k ∗ T_{k′} = e^{2πi θ} T_{k+k′} with θ = λ Λ^{ij} k_i k′_j mod 1.
pub fn moyal_modes(k: &[i64], kp: &[i64], data: &MoyalData) -> Result<(Rational, Vec<i64>)> {
    let dim = data.dim();
    if k.len() != dim || kp.len() != dim {
        return Err(Error::DimensionMismatch(format!("modes must have {dim} entries")));
    }
    let theta = &data.lambda * Rational::from_integer(data.pairing(k, kp));
    let theta = &theta - theta.floor();
    Ok((theta, k.iter().zip(kp).map(|(a, b)| a + b).collect()))
}

/// A finite sum of Fourier modes with cyclotomic coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierSum {
    pub data: MoyalData,
    coeffs: BTreeMap<Vec<i64>, Cyclotomic>,
}

impl FourierSum {
    pub fn zero(data: MoyalData) -> Self {
        FourierSum {
            data,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn mode(data: MoyalData, k: Vec<i64>) -> Result<Self> {
        let mut f = Self::zero(data);
        f.add_term(k, &Cyclotomic::one())?;
        Ok(f)
    }

    pub fn unit(data: MoyalData) -> Self {
        let dim = data.dim();
        Self::mode(data, vec![0; dim]).expect("right length")
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<i64>, Cyclotomic> {
        &self.coeffs
    }

    pub fn add_term(&mut self, k: Vec<i64>, c: &Cyclotomic) -> Result<()> {
        if k.len() != self.data.dim() {
            return Err(Error::DimensionMismatch(format!("modes must have {} entries", self.data.dim())));
        }
        let sum = self.coeffs.get(&k).cloned().unwrap_or_default().add(c);
        if sum.terms().is_empty() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, sum);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        check_same_data(&self.data, &o.data)?;
        let mut out = self.clone();
        for (k, c) in &o.coeffs {
            out.add_term(k.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        let neg = FourierSum {
            data: o.data.clone(),
            coeffs: o.coeffs.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        };
        self.add(&neg)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = FourierSum::zero(self.data.clone());
        for (k, v) in &self.coeffs {
            out.add_term(k.clone(), &v.mul(c)).expect("same length");
        }
        out
    }

    /// Every coefficient vanishes exactly.
    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    pub fn same_value(&self, o: &Self) -> bool {
        self.sub(o).is_ok_and(|d| d.is_zero())
    }
}

fn check_same_data(a: &MoyalData, b: &MoyalData) -> Result<()> {
    if a != b {
        return Err(Error::InvalidTorus("factors carry different Λ or λ".into()));
    }
    Ok(())
}

pub fn moyal_product(f: &FourierSum, g: &FourierSum) -> Result<FourierSum> {
    check_same_data(&f.data, &g.data)?;
    let mut out = FourierSum::zero(f.data.clone());
    for (k, a) in &f.coeffs {
        for (kp, b) in &g.coeffs {
            let (theta, m) = moyal_modes(k, kp, &f.data)?;
            out.add_term(m, &a.mul(b).rotate(&theta))?;
        }
    }
    Ok(out)
}

/// An element of the quotient by the span of T_k − T_{k+Kk′}, indexed by
/// classes in (Z/K)^{2n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusQuotient {
    pub k: usize,
    pub data: MoyalData,
    coeffs: BTreeMap<Vec<i64>, Cyclotomic>,
}

fn check_quotient_data(data: &MoyalData, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidTorus("K must be positive".into()));
    }
    if data.lambda != Rational::new(BigInt::one(), BigInt::from(k)) {
        return Err(Error::InvalidTorus(format!("λ must equal 1/{k}")));
    }
    let g = data
        .lambda_matrix
        .iter()
        .flatten()
        .fold(BigInt::zero(), |acc, &v| acc.gcd(&BigInt::from(v)));
    if !g.is_one() {
        return Err(Error::InvalidTorus(format!("entries of Λ have gcd {g}, expected 1")));
    }
    Ok(())
}

fn fold(k: &[i64], modulus: usize) -> Vec<i64> {
    k.iter().map(|v| v.rem_euclid(modulus as i64)).collect()
}

/// Folds coefficients by k mod K.
pub fn torus_quotient(f: &FourierSum, k: usize) -> Result<TorusQuotient> {
    check_quotient_data(&f.data, k)?;
    let mut out = TorusQuotient {
        k,
        data: f.data.clone(),
        coeffs: BTreeMap::new(),
    };
    for (m, c) in &f.coeffs {
        out.add_term(fold(m, k), c);
    }
    Ok(out)
}

impl TorusQuotient {
    pub fn coeffs(&self) -> &BTreeMap<Vec<i64>, Cyclotomic> {
        &self.coeffs
    }

    fn add_term(&mut self, class: Vec<i64>, c: &Cyclotomic) {
        let sum = self.coeffs.get(&class).cloned().unwrap_or_default().add(c);
        if sum.terms().is_empty() {
            self.coeffs.remove(&class);
        } else {
            self.coeffs.insert(class, sum);
        }
    }

    pub fn unit(data: MoyalData, k: usize) -> Result<Self> {
        torus_quotient(&FourierSum::unit(data), k)
    }

    /// The product computed on the canonical representatives in [0, K)^{2n}.
    pub fn product(&self, o: &Self) -> Result<Self> {
        check_same_data(&self.data, &o.data)?;
        let lift = |q: &TorusQuotient| {
            let mut f = FourierSum::zero(q.data.clone());
            for (m, c) in &q.coeffs {
                f.add_term(m.clone(), c).expect("right length");
            }
            f
        };
        torus_quotient(&moyal_product(&lift(self), &lift(o))?, self.k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    pub fn same_value(&self, o: &Self) -> bool {
        self.k == o.k
            && self.data == o.data
            && self
                .coeffs
                .keys()
                .chain(o.coeffs.keys())
                .all(|m| {
                    let a = self.coeffs.get(m).cloned().unwrap_or_default();
                    let b = o.coeffs.get(m).cloned().unwrap_or_default();
                    a.same_value(&b)
                })
    }
}

/// All classes of (Z/K)^dim, in lexicographic order.
pub fn quotient_classes(dim: usize, k: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (0..k as i64).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// The number of distinct classes the folding produces from modes covering
/// a full period box, which is K^{2n}.
pub fn torus_quotient_dimension(data: &MoyalData, k: usize) -> Result<usize> {
    check_quotient_data(data, k)?;
    let mut all = FourierSum::zero(data.clone());
    // modes in [−K, K)^{2n} cover every class more than once
    for m in quotient_classes(data.dim(), 2 * k) {
        let shifted: Vec<i64> = m.iter().map(|v| v - k as i64).collect();
        all.add_term(shifted, &Cyclotomic::one())?;
    }
    Ok(torus_quotient(&all, k)?.coeffs.len())
}

/// Products of classes do not depend on the representatives: shifting
/// either factor by K·e_i leaves the folded product unchanged, and
/// (T_k − T_{k+Kk′}) ∗ T_m folds to zero.
pub fn check_quotient_well_defined(data: &MoyalData, k: usize) -> Result<bool> {
    check_quotient_data(data, k)?;
    let dim = data.dim();
    let classes = quotient_classes(dim, k);
    let mut shifts = Vec::new();
    for i in 0..dim {
        for sign in [-1i64, 1] {
            let mut s = vec![0i64; dim];
            s[i] = sign * k as i64;
            shifts.push(s);
        }
    }
    for a in &classes {
        for b in &classes {
            let base = torus_quotient(&moyal_product(&FourierSum::mode(data.clone(), a.clone())?, &FourierSum::mode(data.clone(), b.clone())?)?, k)?;
            for s in &shifts {
                let a2: Vec<i64> = a.iter().zip(s).map(|(x, y)| x + y).collect();
                let b2: Vec<i64> = b.iter().zip(s).map(|(x, y)| x + y).collect();
                let (ta, ta2) = (FourierSum::mode(data.clone(), a.clone())?, FourierSum::mode(data.clone(), a2)?);
                let (tb, tb2) = (FourierSum::mode(data.clone(), b.clone())?, FourierSum::mode(data.clone(), b2)?);
                let left = torus_quotient(&moyal_product(&ta2, &tb)?, k)?;
                let right = torus_quotient(&moyal_product(&ta, &tb2)?, k)?;
                if !left.same_value(&base) || !right.same_value(&base) {
                    return Ok(false);
                }
                let ideal = ta.sub(&ta2)?;
                if !torus_quotient(&moyal_product(&ideal, &tb)?, k)?.is_zero()
                    || !torus_quotient(&moyal_product(&tb, &ideal)?, k)?.is_zero()
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
