use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::symbol::Symmetrizer;
use super::{MultiIndex, SymbolTensor};
use crate::arith::{falling_factorial, GaussRational, Rational};
use crate::error::{Error, Result};

type Slices = HashMap<MultiIndex, Vec<(MultiIndex, MultiIndex, GaussRational)>>;

/// The tensor of M_r^{(k,l)}(σ(A), σ(B)), of degree k + l − r.
///
/// Contracts r lower (holomorphic) indices of A with r upper
/// (antiholomorphic) indices of B:
/// `T_{(I,I'),(J',J)} = Σ_a A_{I,aJ'} B_{aI',J}`, symmetrizes, and scales by
/// `k!/(k−r)! · l!/(l−r)!`, the constant produced by r-fold differentiation
/// of the symmetric polynomials σ̃(A) and σ̃(B).
pub fn contract_m(a: &SymbolTensor, b: &SymbolTensor, r: usize) -> Result<SymbolTensor> {
    a.check_compatible(b)?;
    let (n, k, l) = (a.n(), a.degree(), b.degree());
    if r > k.min(l) {
        return Err(Error::ContractionOrder { r, k, l });
    }

    // A_{I, a∪J'} grouped by the contracted part a
    let mut a_slices: Slices = HashMap::new();
    for ((i, lower), v) in a.entries() {
        for (c, rest) in lower.splits(r) {
            a_slices.entry(c).or_default().push((i.clone(), rest, v.clone()));
        }
    }
    let mut b_slices: Slices = HashMap::new();
    for ((upper, j), v) in b.entries() {
        for (c, rest) in upper.splits(r) {
            b_slices.entry(c).or_default().push((rest, j.clone(), v.clone()));
        }
    }

    let mut acc = Symmetrizer::new(n, k + l - r);
    for (c, a_rows) in &a_slices {
        let Some(b_rows) = b_slices.get(c) else {
            continue;
        };
        let wc = c.multiplicity();
        for (i, jp, va) in a_rows {
            let wa = &wc * i.multiplicity() * jp.multiplicity();
            for (ip, j, vb) in b_rows {
                let w: BigInt = &wa * ip.multiplicity() * j.multiplicity();
                let v = (va * vb).scale(&Rational::from_integer(w));
                acc.add(i.merge(ip), jp.merge(j), v);
            }
        }
    }
    let constant = falling_factorial(k, r) * falling_factorial(l, r);
    Ok(acc.finish().scale_rational(&Rational::from_integer(constant)))
}

/// The product of A and B as operators on H^(k):
/// `(AB)_{I,J} = Σ_{sorted a} mult(a)·A_{I,a}·B_{a,J}`.
pub fn operator_product(a: &SymbolTensor, b: &SymbolTensor) -> Result<SymbolTensor> {
    a.check_compatible(b)?;
    if a.degree() != b.degree() {
        return Err(Error::DimensionMismatch(format!(
            "operator degrees {} and {}",
            a.degree(),
            b.degree()
        )));
    }
    let mut by_row: HashMap<&MultiIndex, Vec<(&MultiIndex, &GaussRational)>> = HashMap::new();
    for ((i, j), v) in b.entries() {
        by_row.entry(i).or_default().push((j, v));
    }
    let mut out: HashMap<(MultiIndex, MultiIndex), GaussRational> = HashMap::new();
    for ((i, c), va) in a.entries() {
        let Some(row) = by_row.get(c) else {
            continue;
        };
        let w = va.scale(&Rational::from_integer(c.multiplicity()));
        for (j, vb) in row {
            let e = out
                .entry((i.clone(), (*j).clone()))
                .or_insert_with(GaussRational::zero);
            *e += &(&w * vb);
        }
    }
    SymbolTensor::from_entries(
        a.n(),
        a.degree(),
        out.into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((i, j), v)| (i.entries().to_vec(), j.entries().to_vec(), v)),
    )
}
