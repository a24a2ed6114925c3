//! Substitution ν ↦ α, the ideals it kills, and the quotient algebras.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{
    binomial, factorial, format_rational, kernel, nu_pochhammer, poly_eval, rank, GaussRational, NuPolynomial,
    Rational,
};
use crate::error::{Error, Result};
use crate::star::{extract_structure, star_u, RawNuSeries, StarElement};
use crate::tensor::{identity_symbol, operator_product, MultiIndex, SymbolTensor};


/// A nonzero rational value for ν.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlphaValue {
    value: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaKind {
    /// α = 1/K.
    InverseInteger(usize),
    Generic,
}

impl AlphaValue {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(AlphaValue { value })
    }

    pub fn inverse_integer(k: usize) -> Self {
        assert!(k > 0, "K must be positive");
        AlphaValue {
            value: Rational::new(BigInt::one(), BigInt::from(k)),
        }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn kind(&self) -> AlphaKind {
        if self.value.is_positive() && self.value.numer().is_one() {
            if let Some(k) = self.value.denom().to_usize() {
                return AlphaKind::InverseInteger(k);
            }
        }
        AlphaKind::Generic
    }

    /// α^{(r)}.
    pub fn pochhammer(&self, r: usize) -> GaussRational {
        poly_eval(&nu_pochhammer(r), &self.value)
    }

    fn power(&self, e: usize) -> GaussRational {
        GaussRational::real(num_traits::pow(self.value.clone(), e))
    }
}

impl fmt::Display for AlphaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.value))
    }
}

/// Φ(α) = Σ α^{k−r} α^{(r)} φ_r, at minimal degree.
pub fn substitute(phi: &StarElement, alpha: &AlphaValue) -> SymbolTensor {
    let k = phi.level();
    let mut acc = SymbolTensor::zero(phi.n(), k);
    for (r, c) in phi.components().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let w = &alpha.power(k - r) * &alpha.pochhammer(r);
        if w.is_zero() {
            continue;
        }
        acc = acc.add(&c.scale(&w).embed_to(k)).expect("same shape");
    }
    acc.minimal()
}

pub fn ideal_member(phi: &StarElement, alpha: &AlphaValue) -> bool {
    substitute(phi, alpha).is_zero()
}

/// Φ = head + (ν − α)·cofactor. The head collects the components φ_r with
/// r > K when α = 1/K and the level exceeds K; otherwise it is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealFactorization {
    pub alpha: AlphaValue,
    pub head: StarElement,
    pub cofactor: StarElement,
}

impl IdealFactorization {
    /// The expansion of head + (ν − α)·cofactor.
    pub fn reconstruct(&self) -> RawNuSeries {
        let linear = NuPolynomial::new(vec![GaussRational::real(-self.alpha.value.clone()), GaussRational::one()]);
        self.head
            .expand()
            .add(&self.cofactor.expand().mul_poly(&linear))
            .expect("same n")
    }
}

/// Synthetic division of a ν-series by (ν − α); `None` on nonzero remainder.
fn divide_linear(s: &RawNuSeries, alpha: &AlphaValue) -> Option<RawNuSeries> {
    let Some(top) = s.max_power() else {
        return Some(s.clone());
    };
    let a = GaussRational::real(alpha.value.clone());
    // s = (ν − α)q: q_{j−1} = s_j + α q_j, from the top down
    let mut q = RawNuSeries::zero(s.n(), s.degree());
    let mut carry = SymbolTensor::zero(s.n(), s.degree());
    for j in (1..=top).rev() {
        carry = s.coeff(j).add(&carry.scale(&a)).ok()?;
        q.add_term(j - 1, &carry).ok()?;
    }
    let remainder = s.coeff(0).add(&carry.scale(&a)).ok()?;
    remainder.is_zero().then_some(q)
}

pub fn ideal_factorize(phi: &StarElement, alpha: &AlphaValue) -> Result<IdealFactorization> {
    if !ideal_member(phi, alpha) {
        return Err(Error::NotAMember(alpha.to_string()));
    }
    let (n, k) = (phi.n(), phi.level());
    let mut head_comps: Vec<SymbolTensor> = (0..=k).map(|r| SymbolTensor::zero(n, r)).collect();
    if let AlphaKind::InverseInteger(big_k) = alpha.kind() {
        for r in (big_k + 1)..=k {
            head_comps[r] = phi.component(r).clone();
        }
    }
    let head = StarElement::new(n, head_comps)?;
    let rest = phi.expand().sub(&head.expand())?;
    let quotient = divide_linear(&rest, alpha).ok_or_else(|| Error::NotAMember(alpha.to_string()))?;
    let cofactor = if k == 0 {
        StarElement::zero(n)
    } else {
        extract_structure(&quotient, k - 1)
            .ok_or_else(|| Error::InternalDegree(format!("cofactor has no level-{} structure", k - 1)))?
    };
    let head = if head.is_zero() { StarElement::zero(n) } else { head };
    Ok(IdealFactorization {
        alpha: alpha.clone(),
        head,
        cofactor,
    })
}

/// f ⋆_α g = Σ_r α^r/r! · α^{(k+l−r)}/(α^{(k)}α^{(l)}) · M_r(f, g), at minimal degree.
pub fn star_at(f: &SymbolTensor, g: &SymbolTensor, alpha: &AlphaValue) -> Result<SymbolTensor> {
    f.check_compatible(g)?;
    let (k, l) = (f.degree(), g.degree());
    let den = &alpha.pochhammer(k) * &alpha.pochhammer(l);
    if den.is_zero() {
        return Err(Error::VanishingDenominator {
            alpha: alpha.to_string(),
            degree: k.max(l),
        });
    }
    let mut acc = SymbolTensor::zero(f.n(), k + l);
    for r in 0..=k.min(l) {
        let num = &alpha.power(r) * &alpha.pochhammer(k + l - r);
        if num.is_zero() {
            continue;
        }
        let w = num.checked_div(&den)?.scale(&Rational::new(BigInt::one(), factorial(r)));
        let m = crate::tensor::contract_m(f, g, r)?;
        acc = acc.add(&m.scale(&w).embed_to(k + l))?;
    }
    Ok(acc.minimal())
}

/// An operator on the degree-K polynomials, held as a degree-K tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientOperator {
    pub k: usize,
    pub matrix: SymbolTensor,
}

impl QuotientOperator {
    pub fn identity(n: usize, k: usize) -> Self {
        QuotientOperator {
            k,
            matrix: identity_symbol(n, k),
        }
    }

    pub fn compose(&self, o: &Self) -> Result<Self> {
        Ok(QuotientOperator {
            k: self.k,
            matrix: operator_product(&self.matrix, &o.matrix)?,
        })
    }
}

/// The class of Φ modulo the ideal at ν = 1/K, as an operator.
pub fn quotient_map(phi: &StarElement, k: usize) -> Result<QuotientOperator> {
    if k == 0 {
        return Err(Error::DimensionMismatch("K must be positive".into()));
    }
    let s = substitute(phi, &AlphaValue::inverse_integer(k));
    if s.degree() > k {
        return Err(Error::InternalDegree(format!(
            "substitution at 1/{k} has minimal degree {}",
            s.degree()
        )));
    }
    Ok(QuotientOperator {
        k,
        matrix: s.embed_to(k),
    })
}

/// The level-K element ν^{(K)}/(1/K)^{(K)}·σ(A) whose class is the operator A.
pub fn quotient_representative(op: &QuotientOperator) -> StarElement {
    let c = AlphaValue::inverse_integer(op.k).pochhammer(op.k).inv().expect("(1/K)^{(K)} ≠ 0");
    StarElement::lift(&op.matrix.scale(&c))
}

/// N = C(n+K, K), the dimension of the space the quotient acts on.
pub fn quotient_size(n: usize, k: usize) -> usize {
    binomial(n + k, k).to_usize().expect("small")
}

/// N², the dimension of the quotient algebra.
pub fn quotient_dimension(n: usize, k: usize) -> usize {
    let s = quotient_size(n, k);
    s * s
}

fn elementary(n: usize, i: usize, j: usize) -> SymbolTensor {
    SymbolTensor::from_entries(n, 1, vec![(vec![i], vec![j], GaussRational::one())]).expect("in range")
}

fn as_vector(t: &SymbolTensor, basis: &[(MultiIndex, MultiIndex)]) -> Vec<GaussRational> {
    basis.iter().map(|(i, j)| t.get(i, j)).collect()
}

fn operator_basis(n: usize, k: usize) -> Vec<(MultiIndex, MultiIndex)> {
    let idx = MultiIndex::all(n, k);
    idx.iter()
        .flat_map(|i| idx.iter().map(move |j| (i.clone(), j.clone())))
        .collect()
}

/// The rank of the quotient images of all star-words of length ≤ K in the
/// elementary symbols σ(E_ij), computed exactly.
pub fn quotient_image_rank(n: usize, k: usize) -> Result<usize> {
    let gens: Vec<StarElement> = (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .map(|(i, j)| StarElement::lift(&elementary(n, i, j)))
        .collect();
    let basis = operator_basis(n, k);
    let mut words = vec![StarElement::unit(n)];
    let mut rows = vec![as_vector(&quotient_map(&words[0], k)?.matrix, &basis)];
    for _ in 0..k {
        let mut next = Vec::with_capacity(words.len() * gens.len());
        for w in &words {
            for g in &gens {
                let p = star_u(w, g)?;
                rows.push(as_vector(&quotient_map(&p, k)?.matrix, &basis));
                next.push(p);
            }
        }
        words = next;
    }
    Ok(rank(&rows))
}

/// The Lie algebra u(n+1): i·E_jj, E_jl − E_lj and i(E_jl + E_lj) for j < l.
pub fn unitary_generators(n: usize) -> Vec<SymbolTensor> {
    let i = GaussRational::i();
    let mut out = Vec::new();
    for j in 0..=n {
        out.push(elementary(n, j, j).scale(&i));
        for l in (j + 1)..=n {
            out.push(elementary(n, j, l).sub(&elementary(n, l, j)).expect("same shape"));
            out.push(elementary(n, j, l).add(&elementary(n, l, j)).expect("same shape").scale(&i));
        }
    }
    out
}

/// True iff the only operators commuting with the quotient images of all
/// u(n+1) generators are multiples of the identity.
pub fn check_irreducible(n: usize, k: usize) -> Result<bool> {
    let basis = operator_basis(n, k);
    let images: Vec<SymbolTensor> = unitary_generators(n)
        .iter()
        .map(|g| quotient_map(&StarElement::lift(g), k).map(|q| q.matrix))
        .collect::<Result<_>>()?;
    // one column per unknown entry of X, one row per (generator, entry) of [X, M]
    let cols: Vec<Vec<GaussRational>> = basis
        .iter()
        .map(|(p, q)| {
            let x = SymbolTensor::from_entries(
                n,
                k,
                vec![(p.entries().to_vec(), q.entries().to_vec(), GaussRational::one())],
            )
            .expect("in range");
            let mut col = Vec::new();
            for m in &images {
                let c = operator_product(&x, m)?.sub(&operator_product(m, &x)?)?;
                col.extend(as_vector(&c, &basis));
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<GaussRational>> = (0..cols[0].len())
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let ker = kernel(&rows, basis.len());
    if ker.len() != 1 {
        return Ok(false);
    }
    let id = as_vector(&identity_symbol(n, k), &basis);
    Ok(rank(&[ker[0].clone(), id]) == 1)
}
