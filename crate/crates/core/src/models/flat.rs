//! The Wick product on C^{n+1} restricted to exponential-polynomials
//! p(z, z̄)·e^{a·z + b·z̄}, with coefficients polynomial in λ times e^{λs}.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binomial, factorial, GaussRational, NuPolynomial, Rational};
use crate::error::{Error, Result};

/// Exponents of (z, z̄).
pub type Exponents = (Vec<u32>, Vec<u32>);

/// The exponential part e^{a·z + b·z̄} · e^{λs} of a term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpKey {
    pub a: Vec<GaussRational>,
    pub b: Vec<GaussRational>,
    pub slope: GaussRational,
}

type LambdaPoly = BTreeMap<Exponents, NuPolynomial>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPolyFunction {
    n: usize,
    groups: BTreeMap<ExpKey, LambdaPoly>,
}

/// One flattened term: coeff(λ) · e^{λ·slope} · z^mz z̄^mzb · e^{a·z + b·z̄}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPolyTerm {
    pub z_exp: Vec<u32>,
    pub zbar_exp: Vec<u32>,
    pub a: Vec<GaussRational>,
    pub b: Vec<GaussRational>,
    pub coeff: NuPolynomial,
    pub slope: GaussRational,
}

fn add_into(p: &mut LambdaPoly, m: Exponents, c: &NuPolynomial) {
    if c.is_zero() {
        return;
    }
    let sum = match p.get(&m) {
        Some(cur) => cur + c,
        None => c.clone(),
    };
    if sum.is_zero() {
        p.remove(&m);
    } else {
        p.insert(m, sum);
    }
}

fn lambda_pow(c: &GaussRational, k: usize) -> NuPolynomial {
    NuPolynomial::monomial(c.pow(k), k)
}

/// p(z + λc, z̄) when `holomorphic`, else p(z, z̄ + λc).
fn shift(p: &LambdaPoly, c: &[GaussRational], holomorphic: bool) -> LambdaPoly {
    let mut out = p.clone();
    for (i, ci) in c.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        let mut next = LambdaPoly::new();
        for (m, v) in &out {
            let e = if holomorphic { m.0[i] } else { m.1[i] };
            for k in 0..=e {
                let mut m2 = m.clone();
                if holomorphic {
                    m2.0[i] -= k;
                } else {
                    m2.1[i] -= k;
                }
                let w = lambda_pow(ci, k as usize).scale(&GaussRational::from_bigint(binomial(e as usize, k as usize)));
                add_into(&mut next, m2, &(v * &w));
            }
        }
        out = next;
    }
    out
}

/// exp(λ Σ_i ∂_{z^i} ⊗ ∂_{z̄^i}) on polynomial prefactors: the Wick product
/// of polynomials.
fn poly_wick(p: &LambdaPoly, q: &LambdaPoly, n: usize) -> LambdaPoly {
    let mut out = LambdaPoly::new();
    for ((pz, pzb), pc) in p {
        for ((qz, qzb), qc) in q {
            let base = pc * qc;
            // t_i ranges over 0..=min(pz_i, qzb_i)
            let bounds: Vec<u32> = (0..=n).map(|i| pz[i].min(qzb[i])).collect();
            let mut t = vec![0u32; n + 1];
            'odometer: loop {
                let mut w = BigInt::one();
                for i in 0..=n {
                    let (u, v, ti) = (pz[i] as usize, qzb[i] as usize, t[i] as usize);
                    w *= binomial(u, ti) * binomial(v, ti) * factorial(ti);
                }
                let total: u32 = t.iter().sum();
                let z: Vec<u32> = (0..=n).map(|i| pz[i] - t[i] + qz[i]).collect();
                let zb: Vec<u32> = (0..=n).map(|i| pzb[i] + qzb[i] - t[i]).collect();
                let c = base.shift(total as usize).scale(&GaussRational::from_bigint(w));
                add_into(&mut out, (z, zb), &c);

                for pos in 0..=n {
                    if t[pos] < bounds[pos] {
                        t[pos] += 1;
                        continue 'odometer;
                    }
                    t[pos] = 0;
                }
                break;
            }
        }
    }
    out
}

impl ExpPolyFunction {
    pub fn zero(n: usize) -> Self {
        ExpPolyFunction {
            n,
            groups: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, vec![0; n + 1], vec![0; n + 1], GaussRational::one())
    }

    /// c·z^z_exp z̄^zbar_exp.
    pub fn monomial(n: usize, z_exp: Vec<u32>, zbar_exp: Vec<u32>, c: GaussRational) -> Self {
        let mut f = Self::zero(n);
        f.add_term(ExpPolyTerm {
            z_exp,
            zbar_exp,
            a: vec![GaussRational::zero(); n + 1],
            b: vec![GaussRational::zero(); n + 1],
            coeff: NuPolynomial::constant(c),
            slope: GaussRational::zero(),
        })
        .expect("consistent lengths");
        f
    }

    /// e_{(a,b)} = e^{a·z + b·z̄}.
    pub fn exponential(a: Vec<GaussRational>, b: Vec<GaussRational>) -> Result<Self> {
        let n = a.len().checked_sub(1).ok_or_else(|| Error::DimensionMismatch("empty exponent vector".into()))?;
        let mut f = Self::zero(n);
        f.add_term(ExpPolyTerm {
            z_exp: vec![0; n + 1],
            zbar_exp: vec![0; n + 1],
            a,
            b,
            coeff: NuPolynomial::one(),
            slope: GaussRational::zero(),
        })?;
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn add_term(&mut self, t: ExpPolyTerm) -> Result<()> {
        let len = self.n + 1;
        if [t.z_exp.len(), t.zbar_exp.len(), t.a.len(), t.b.len()].iter().any(|&l| l != len) {
            return Err(Error::DimensionMismatch(format!("term vectors must have length {len}")));
        }
        let key = ExpKey {
            a: t.a,
            b: t.b,
            slope: t.slope,
        };
        let group = self.groups.entry(key.clone()).or_default();
        add_into(group, (t.z_exp, t.zbar_exp), &t.coeff);
        if group.is_empty() {
            self.groups.remove(&key);
        }
        Ok(())
    }

    pub fn terms(&self) -> Vec<ExpPolyTerm> {
        let mut out = Vec::new();
        for (key, poly) in &self.groups {
            for ((z, zb), c) in poly {
                out.push(ExpPolyTerm {
                    z_exp: z.clone(),
                    zbar_exp: zb.clone(),
                    a: key.a.clone(),
                    b: key.b.clone(),
                    coeff: c.clone(),
                    slope: key.slope.clone(),
                });
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(format!("n = {} vs n = {}", self.n, o.n)));
        }
        let mut out = self.clone();
        for t in o.terms() {
            out.add_term(t)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        let mut out = Self::zero(self.n);
        for mut t in self.terms() {
            t.coeff = t.coeff.scale(c);
            out.add_term(t).expect("consistent lengths");
        }
        out
    }

    /// Pointwise product, for comparison.
    pub fn pointwise(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(format!("n = {} vs n = {}", self.n, o.n)));
        }
        let mut out = Self::zero(self.n);
        for s in self.terms() {
            for t in o.terms() {
                out.add_term(ExpPolyTerm {
                    z_exp: s.z_exp.iter().zip(&t.z_exp).map(|(x, y)| x + y).collect(),
                    zbar_exp: s.zbar_exp.iter().zip(&t.zbar_exp).map(|(x, y)| x + y).collect(),
                    a: s.a.iter().zip(&t.a).map(|(x, y)| x + y).collect(),
                    b: s.b.iter().zip(&t.b).map(|(x, y)| x + y).collect(),
                    coeff: &s.coeff * &t.coeff,
                    slope: &s.slope + &t.slope,
                })?;
            }
        }
        Ok(out)
    }

    /// Sets λ = α: each term becomes coeff(α)·e^{α·slope}, with the
    /// exponent α·slope kept symbolic.
    pub fn substitute_lambda(&self, alpha: &Rational) -> BTreeMap<(Exponents, ExpKey), GaussRational> {
        let a = GaussRational::real(alpha.clone());
        let mut out: BTreeMap<(Exponents, ExpKey), GaussRational> = BTreeMap::new();
        for t in self.terms() {
            let key = (
                (t.z_exp, t.zbar_exp),
                ExpKey {
                    a: t.a,
                    b: t.b,
                    slope: &t.slope * &a,
                },
            );
            let v = t.coeff.eval(&a);
            let e = out.entry(key.clone()).or_insert_with(GaussRational::zero);
            *e += &v;
            if e.is_zero() {
                out.remove(&key);
            }
        }
        out
    }
}

/// F ∗ G, using e_{(a,b)}p ∗ e_{(a′,b′)}q =
/// e^{λ a·b′} e_{(a+a′, b+b′)} · [p(z + λb′, z̄) ∗ q(z, z̄ + λa)].
pub fn wick_product_flat(f: &ExpPolyFunction, g: &ExpPolyFunction) -> Result<ExpPolyFunction> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch(format!("n = {} vs n = {}", f.n, g.n)));
    }
    let n = f.n;
    let mut out = ExpPolyFunction::zero(n);
    for (k1, p) in &f.groups {
        for (k2, q) in &g.groups {
            let ab: GaussRational = k1.a.iter().zip(&k2.b).map(|(x, y)| x * y).sum();
            let key = ExpKey {
                a: k1.a.iter().zip(&k2.a).map(|(x, y)| x + y).collect(),
                b: k1.b.iter().zip(&k2.b).map(|(x, y)| x + y).collect(),
                slope: &(&k1.slope + &k2.slope) + &ab,
            };
            let prod = poly_wick(&shift(p, &k2.b, true), &shift(q, &k1.a, false), n);
            for ((z, zb), c) in prod {
                out.add_term(ExpPolyTerm {
                    z_exp: z,
                    zbar_exp: zb,
                    a: key.a.clone(),
                    b: key.b.clone(),
                    coeff: c,
                    slope: key.slope.clone(),
                })?;
            }
        }
    }
    Ok(out)
}
