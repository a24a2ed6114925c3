use num_traits::{One, Zero};

use super::GaussRational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<GaussRational>),
    /// `particular + span(kernel)`.
    Parametrized {
        particular: Vec<GaussRational>,
        kernel: Vec<Vec<GaussRational>>,
    },
    Inconsistent,
}

impl Solution {
    pub fn is_solvable(&self) -> bool {
        !matches!(self, Solution::Inconsistent)
    }

    /// Some solution, if any exists.
    pub fn any(&self) -> Option<&[GaussRational]> {
        match self {
            Solution::Unique(x) => Some(x),
            Solution::Parametrized { particular, .. } => Some(particular),
            Solution::Inconsistent => None,
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<GaussRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv().unwrap();
        if !inv.is_one() {
            for x in m[row].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Exact Gaussian elimination for `matrix · x = rhs`.
pub fn linear_solve(matrix: &[Vec<GaussRational>], rhs: &[GaussRational]) -> Result<Solution> {
    if matrix.len() != rhs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but {} right-hand sides",
            matrix.len(),
            rhs.len()
        )));
    }
    let cols = matrix.first().map_or(0, |r| r.len());
    if let Some(bad) = matrix.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!(
            "ragged matrix: row of length {} vs {cols}",
            bad.len()
        )));
    }
    let mut aug: Vec<Vec<GaussRational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return Ok(Solution::Inconsistent);
    }
    let mut particular = vec![GaussRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug[r][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return Ok(Solution::Unique(particular));
    }
    Ok(Solution::Parametrized {
        particular,
        kernel: kernel_from_rref(&aug, &pivots, &free, cols),
    })
}

fn kernel_from_rref(
    m: &[Vec<GaussRational>],
    pivots: &[usize],
    free: &[usize],
    cols: usize,
) -> Vec<Vec<GaussRational>> {
    free.iter()
        .map(|&f| {
            let mut v = vec![GaussRational::zero(); cols];
            v[f] = GaussRational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -&m[r][f];
            }
            v
        })
        .collect()
}

/// A basis of the null space of `matrix` (which has `cols` columns).
pub fn kernel(matrix: &[Vec<GaussRational>], cols: usize) -> Vec<Vec<GaussRational>> {
    let mut m = matrix.to_vec();
    let pivots = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    kernel_from_rref(&m, &pivots, &free, cols)
}

/// Rank of the span of the given row vectors.
pub fn rank(rows: &[Vec<GaussRational>]) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(v: i64) -> GaussRational {
        GaussRational::from_int(v)
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<GaussRational>> {
        rows.iter().map(|r| r.iter().map(|&v| g(v)).collect()).collect()
    }

    #[test]
    fn solvability_classes() {
        let id = mat(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            linear_solve(&id, &[g(3), g(-2)]).unwrap(),
            Solution::Unique(vec![g(3), g(-2)])
        );
        let singular = mat(&[&[1, 1], &[2, 2]]);
        assert_eq!(linear_solve(&singular, &[g(1), g(3)]).unwrap(), Solution::Inconsistent);
        match linear_solve(&singular, &[g(1), g(2)]).unwrap() {
            Solution::Parametrized { particular, kernel } => {
                assert_eq!(&particular[0] + &particular[1], g(1));
                assert_eq!(kernel, vec![vec![g(-1), g(1)]]);
            }
            other => panic!("expected parametrized, got {other:?}"),
        }
        assert!(matches!(
            linear_solve(&singular, &[g(1)]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rank_and_kernel() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&m), 2);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            let dot: GaussRational = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    fn det3(m: &[Vec<GaussRational>]) -> GaussRational {
        let t = |a: usize, b: usize, c: usize| &(&m[0][a] * &m[1][b]) * &m[2][c];
        &(&(&(&t(0, 1, 2) + &t(1, 2, 0)) + &t(2, 0, 1)) - &(&t(2, 1, 0) + &t(0, 2, 1)))
            - &t(1, 0, 2)
    }

    // Cramer's rule oracle on random 3×3 systems.
    #[test]
    fn agrees_with_cramer() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let m: Vec<Vec<GaussRational>> = (0..3)
                .map(|_| {
                    (0..3)
                        .map(|_| GaussRational::from_ints(rng.gen_range(-3..4), rng.gen_range(-2..3)))
                        .collect()
                })
                .collect();
            let b: Vec<GaussRational> =
                (0..3).map(|_| GaussRational::from_ints(rng.gen_range(-5..6), 0)).collect();
            let d = det3(&m);
            let sol = linear_solve(&m, &b).unwrap();
            if d.is_zero() {
                assert!(!matches!(sol, Solution::Unique(_)));
                continue;
            }
            let expected: Vec<GaussRational> = (0..3)
                .map(|c| {
                    let mut mc = m.clone();
                    for r in 0..3 {
                        mc[r][c] = b[r].clone();
                    }
                    &det3(&mc) / &d
                })
                .collect();
            assert_eq!(sol, Solution::Unique(expected));
        }
    }
}
