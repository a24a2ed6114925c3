use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{RawNuSeries, StarElement};
use crate::arith::{
    factorial, falling_factorial, nu_pochhammer, GaussRational, NuPolynomial, NuRationalFunction, Rational,
};
use crate::error::{Error, Result};
use crate::tensor::{contract_m, identity_symbol, pointwise_mul, BiPoly, SymbolTensor};

/// One summand `coeff(ν) · tensor` of a product of symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarTerm {
    pub r: usize,
    pub coeff: NuRationalFunction,
    pub tensor: SymbolTensor,
}

/// A finite sum `Σ_r c_r(ν) T_r` with rational-function coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolStarResult {
    pub n: usize,
    pub terms: Vec<StarTerm>,
}

/// ν^r/r! · ν^{(k+l−r)} / (ν^{(k)} ν^{(l)}).
pub fn star_coefficient(k: usize, l: usize, r: usize) -> NuRationalFunction {
    let num = &NuPolynomial::monomial(GaussRational::real(Rational::new(BigInt::one(), factorial(r))), r)
        * &nu_pochhammer(k + l - r);
    NuRationalFunction::new(num, &nu_pochhammer(k) * &nu_pochhammer(l)).expect("nonzero denominator")
}

impl SymbolStarResult {
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_zero() || t.tensor.is_zero())
    }

    fn common_denominator(&self) -> NuPolynomial {
        let mut den = NuPolynomial::one();
        for t in &self.terms {
            let d = t.coeff.denominator();
            let g = NuPolynomial::gcd(&den, d);
            den = &den * &d.div_rem(&g).expect("gcd divides").0;
        }
        den
    }

    /// The sum multiplied by `den`, which must clear every denominator.
    pub fn cleared(&self, den: &NuPolynomial) -> Result<RawNuSeries> {
        let mut s = RawNuSeries::zero(self.n, 0);
        for t in &self.terms {
            let c = &t.coeff * &NuRationalFunction::from_poly(den.clone());
            let p = c.as_polynomial().ok_or_else(|| {
                Error::InternalDegree(format!("{den} does not clear the denominator of {}", t.coeff))
            })?;
            s = s.add(&RawNuSeries::constant(&t.tensor).mul_poly(p))?;
        }
        Ok(s)
    }

    /// Equality of the two sums as functions with ν-rational coefficients.
    pub fn same_sum(&self, o: &Self) -> bool {
        if self.n != o.n {
            return false;
        }
        let (d1, d2) = (self.common_denominator(), o.common_denominator());
        let den = &d1 * &d2;
        match (self.cleared(&den), o.cleared(&den)) {
            (Ok(a), Ok(b)) => a.same_series(&b),
            _ => false,
        }
    }

    /// Termwise complex conjugation with ν real.
    pub fn conj(&self) -> Self {
        SymbolStarResult {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| StarTerm {
                    r: t.r,
                    coeff: conj_ratfun(&t.coeff),
                    tensor: t.tensor.conj(),
                })
                .collect(),
        }
    }
}

fn conj_poly(p: &NuPolynomial) -> NuPolynomial {
    NuPolynomial::new(p.coeffs().iter().map(|c| c.conj()).collect())
}

fn conj_ratfun(f: &NuRationalFunction) -> NuRationalFunction {
    NuRationalFunction::new(conj_poly(f.numerator()), conj_poly(f.denominator())).expect("nonzero denominator")
}

/// f ⋆ g for symbols of degrees k and l.
pub fn star_symbols(f: &SymbolTensor, g: &SymbolTensor) -> Result<SymbolStarResult> {
    f.check_compatible(g)?;
    let (k, l) = (f.degree(), g.degree());
    let terms = (0..=k.min(l))
        .map(|r| {
            Ok(StarTerm {
                r,
                coeff: star_coefficient(k, l, r),
                tensor: contract_m(f, g, r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolStarResult { n: f.n(), terms })
}

/// Φ ⋆ Ψ at level k + l. Component r+s−t receives M_t(φ_r, ψ_s)/t!.
pub fn star_u(phi: &StarElement, psi: &StarElement) -> Result<StarElement> {
    if phi.n() != psi.n() {
        return Err(Error::DimensionMismatch(format!("n = {} vs n = {}", phi.n(), psi.n())));
    }
    let n = phi.n();
    let (k, l) = (phi.level(), psi.level());
    let pairs: Vec<(usize, usize)> = (0..=k)
        .flat_map(|r| (0..=l).map(move |s| (r, s)))
        .filter(|&(r, s)| !phi.component(r).is_zero() && !psi.component(s).is_zero())
        .collect();
    let parts = pairs
        .par_iter()
        .map(|&(r, s)| {
            (0..=r.min(s))
                .map(|t| {
                    let m = contract_m(phi.component(r), psi.component(s), t)?;
                    let inv = Rational::new(BigInt::one(), factorial(t));
                    Ok((r + s - t, m.scale_rational(&inv)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut comps: Vec<SymbolTensor> = (0..=k + l).map(|c| SymbolTensor::zero(n, c)).collect();
    for (c, t) in parts.into_iter().flatten() {
        comps[c] = comps[c].add(&t)?;
    }
    StarElement::new(n, comps)
}

/// f ⋆ g − g ⋆ f, term by term. The order-zero terms cancel and are omitted.
pub fn star_commutator(f: &SymbolTensor, g: &SymbolTensor) -> Result<SymbolStarResult> {
    f.check_compatible(g)?;
    let (k, l) = (f.degree(), g.degree());
    let mut terms = Vec::new();
    for r in 1..=k.min(l) {
        let t = contract_m(f, g, r)?.sub(&contract_m(g, f, r)?)?;
        if !t.is_zero() {
            terms.push(StarTerm {
                r,
                coeff: star_coefficient(k, l, r),
                tensor: t,
            });
        }
    }
    Ok(SymbolStarResult { n: f.n(), terms })
}

/// (2/i)·(M_1(σ(A), φ) − M_1(φ, σ(A))), a symbol of the degree of φ.
pub fn poisson_bracket_deg1(a: &SymbolTensor, phi: &SymbolTensor) -> Result<SymbolTensor> {
    if a.degree() != 1 {
        return Err(Error::DimensionMismatch(format!("generator of degree {}", a.degree())));
    }
    if phi.degree() == 0 {
        return Ok(SymbolTensor::zero(phi.n(), 0));
    }
    let diff = contract_m(a, phi, 1)?.sub(&contract_m(phi, a, 1)?)?;
    Ok(diff.scale(&GaussRational::from_ints(0, -2)))
}

/// {p, q} = (2/i) Σ_j (∂p/∂z^j ∂q/∂z̄^j − ∂p/∂z̄^j ∂q/∂z^j), computed on
/// the explicit polynomials.
pub(crate) fn literal_bracket(p: &BiPoly, q: &BiPoly, n: usize) -> BiPoly {
    let mut out = BiPoly::zero(n);
    for j in 0..=n {
        out = out.add(&p.d_z(j).mul(&q.d_zbar(j)));
        out = out.add(&p.d_zbar(j).mul(&q.d_z(j)).scale(&GaussRational::from_int(-1)));
    }
    out.scale(&GaussRational::from_ints(0, -2))
}

/// σ(A) ⋆ φ − φ ⋆ σ(A) = ν·(i/2)·{σ̃(A), σ̃(φ)} with the bracket taken
/// literally on polynomials of C^{n+1}.
pub fn check_strong_invariance(a: &[Vec<GaussRational>], phi: &SymbolTensor) -> Result<bool> {
    let sa = SymbolTensor::from_matrix(a)?;
    sa.check_compatible(phi)?;
    let lhs = star_commutator(&sa, phi)?;
    let l = phi.degree();
    let rhs = if l == 0 {
        SymbolStarResult { n: phi.n(), terms: vec![] }
    } else {
        let half_i = GaussRational::new(Rational::zero(), crate::arith::rational(1, 2));
        let bracket = literal_bracket(&sa.to_poly(), &phi.to_poly(), phi.n());
        let t = SymbolTensor::from_poly(phi.n(), l, &bracket)?.scale(&half_i);
        SymbolStarResult {
            n: phi.n(),
            terms: vec![StarTerm {
                r: 1,
                coeff: NuRationalFunction::from_poly(NuPolynomial::nu()),
                tensor: t,
            }],
        }
    };
    Ok(lhs.same_sum(&rhs))
}

/// The pointwise power σ^k, with σ^0 = 1.
pub fn symbol_power(f: &SymbolTensor, k: usize) -> Result<SymbolTensor> {
    let mut out = identity_symbol(f.n(), 0);
    for _ in 0..k {
        out = pointwise_mul(&out, f)?;
    }
    Ok(out)
}

/// Compares star_symbols(σ(A)^k, σ(B)^l) term by term with
/// Σ_r ν^r/r! · k!l!/((k−r)!(l−r)!) · ν^{(k+l−r)}/(ν^{(k)}ν^{(l)}) · σ(AB)^r σ(A)^{k−r} σ(B)^{l−r}.
pub fn check_corollary2(a: &[Vec<GaussRational>], b: &[Vec<GaussRational>], k: usize, l: usize) -> Result<bool> {
    let (sa, sb) = (SymbolTensor::from_matrix(a)?, SymbolTensor::from_matrix(b)?);
    sa.check_compatible(&sb)?;
    let ab: Vec<Vec<GaussRational>> = (0..a.len())
        .map(|i| (0..a.len()).map(|j| (0..a.len()).map(|c| &a[i][c] * &b[c][j]).sum()).collect())
        .collect();
    let sab = SymbolTensor::from_matrix(&ab)?;
    let lhs = star_symbols(&symbol_power(&sa, k)?, &symbol_power(&sb, l)?)?;
    if lhs.terms.len() != k.min(l) + 1 {
        return Ok(false);
    }
    for (r, term) in lhs.terms.iter().enumerate() {
        let w = falling_factorial(k, r) * falling_factorial(l, r);
        let prod = pointwise_mul(
            &pointwise_mul(&symbol_power(&sab, r)?, &symbol_power(&sa, k - r)?)?,
            &symbol_power(&sb, l - r)?,
        )?;
        let expected = StarTerm {
            r,
            coeff: star_coefficient(k, l, r),
            tensor: prod.scale_rational(&Rational::from_integer(w)),
        };
        if *term != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

