//! Literal evaluation of M_r^{(k,l)} by differentiating explicit polynomials.
//!
//! Kept deliberately naive: it enumerates every ordered index tuple and
//! differentiates one variable at a time, so it shares no combinatorics with
//! [`super::contract_m`].

use super::bipoly::BiPoly;
use super::SymbolTensor;
use crate::error::{Error, Result};

/// `Σ_{i_1…i_r} ∂^r σ̃(A)/∂z^{i_1}⋯∂z^{i_r} · ∂^r σ̃(B)/∂z̄^{i_1}⋯∂z̄^{i_r}`,
/// read back as a degree-(k+l−r) symbol.
pub fn brute_force_m(a: &SymbolTensor, b: &SymbolTensor, r: usize) -> Result<SymbolTensor> {
    a.check_compatible(b)?;
    let (n, k, l) = (a.n(), a.degree(), b.degree());
    if r > k.min(l) {
        return Err(Error::ContractionOrder { r, k, l });
    }
    let pa = a.to_poly();
    let pb = b.to_poly();
    let mut total = BiPoly::zero(n);
    let mut tuple = vec![0usize; r];
    loop {
        let mut da = pa.clone();
        let mut db = pb.clone();
        for &i in &tuple {
            da = da.d_z(i);
            db = db.d_zbar(i);
        }
        total = total.add(&da.mul(&db));

        // next tuple in (n+1)^r, odometer order
        let mut pos = 0;
        loop {
            if pos == r {
                return SymbolTensor::from_poly(n, k + l - r, &total);
            }
            tuple[pos] += 1;
            if tuple[pos] <= n {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}
