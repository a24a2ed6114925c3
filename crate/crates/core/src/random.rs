//! Seeded generators for exact test instances.

use rand::Rng;

use crate::arith::{rational, GaussRational};
use crate::tensor::{MultiIndex, SymbolTensor};

/// A small Gaussian rational with numerators in [-3, 3] and denominators in [1, 3].
pub fn random_gauss<R: Rng + ?Sized>(rng: &mut R) -> GaussRational {
    GaussRational::new(
        rational(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
        rational(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
    )
}

/// A small Gaussian integer with parts in [-3, 3].
pub fn random_gauss_int<R: Rng + ?Sized>(rng: &mut R) -> GaussRational {
    GaussRational::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3))
}

/// An (n+1)×(n+1) matrix with small Gaussian rational entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<GaussRational>> {
    (0..=n).map(|_| (0..=n).map(|_| random_gauss(rng)).collect()).collect()
}

/// An (n+1)×(n+1) matrix with small Gaussian integer entries.
pub fn random_int_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<GaussRational>> {
    (0..=n).map(|_| (0..=n).map(|_| random_gauss_int(rng)).collect()).collect()
}

/// A matrix with A_ij = −conj(A_ji).
pub fn random_antihermitean<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<GaussRational>> {
    let mut m = random_matrix(rng, n);
    for i in 0..=n {
        for j in 0..i {
            m[i][j] = -m[j][i].conj();
        }
        m[i][i] = GaussRational::new(rational(0, 1), m[i][i].im.clone());
    }
    m
}

/// A symbol of degree k whose entries are dense with probability about 3/4.
pub fn random_symbol<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> SymbolTensor {
    let idx = MultiIndex::all(n, k);
    let mut entries = Vec::new();
    for i in &idx {
        for j in &idx {
            if rng.gen_range(0..4) != 0 {
                entries.push((i.entries().to_vec(), j.entries().to_vec(), random_gauss(rng)));
            }
        }
    }
    SymbolTensor::from_entries(n, k, entries).expect("indices in range")
}

/// A nonzero point of C^{n+1} with small Gaussian integer coordinates.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<GaussRational> {
    loop {
        let z: Vec<GaussRational> = (0..=n).map(|_| random_gauss_int(rng)).collect();
        if z.iter().any(|c| !num_traits::Zero::is_zero(c)) {
            return z;
        }
    }
}

/// A structured element of the given level whose components are present
/// with probability about 2/3.
pub fn random_star_element<R: Rng + ?Sized>(rng: &mut R, n: usize, level: usize) -> crate::star::StarElement {
    let comps: Vec<SymbolTensor> = (0..=level)
        .map(|r| {
            if r == level || rng.gen_range(0..3) != 0 {
                random_symbol(rng, n, r)
            } else {
                SymbolTensor::zero(n, r)
            }
        })
        .collect();
    crate::star::StarElement::new(n, comps).expect("components at their own degree")
}

/// A sum of `terms` Fourier modes with entries in [-3, 3], each carrying a
/// small amplitude and a phase that is a multiple of 1/12.
pub fn random_fourier_sum<R: Rng + ?Sized>(
    rng: &mut R,
    data: &crate::models::torus::MoyalData,
    terms: usize,
) -> crate::models::torus::FourierSum {
    use crate::models::torus::{Cyclotomic, FourierSum};
    let mut f = FourierSum::zero(data.clone());
    for _ in 0..terms {
        let k: Vec<i64> = (0..data.dim()).map(|_| rng.gen_range(-3..=3)).collect();
        let c = Cyclotomic::from_phase(
            rational(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
            rational(rng.gen_range(0..12), 12),
        );
        f.add_term(k, &c).expect("mode of the right length");
    }
    f
}
