use num_bigint::BigInt;

use crate::arith::factorial;
use crate::error::{Error, Result};

/// A nondecreasing tuple of coordinate indices in `0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// Sorts `entries` and checks each against `n`.
    pub fn new(mut entries: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e > n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        entries.sort_unstable();
        Ok(MultiIndex(entries))
    }

    pub(crate) fn from_sorted(entries: Vec<usize>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0] <= w[1]));
        MultiIndex(entries)
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Exponent vector of length `n + 1`.
    pub fn exponents(&self, n: usize) -> Vec<u32> {
        let mut e = vec![0u32; n + 1];
        for &i in &self.0 {
            e[i] += 1;
        }
        e
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        MultiIndex(
            exps.iter()
                .enumerate()
                .flat_map(|(i, &m)| std::iter::repeat_n(i, m as usize))
                .collect(),
        )
    }

    /// Number of distinct orderings: `k! / ∏ m_j!`.
    pub fn multiplicity(&self) -> BigInt {
        let mut denom = BigInt::from(1);
        let mut run = 0;
        for (pos, e) in self.0.iter().enumerate() {
            if pos > 0 && self.0[pos - 1] == *e {
                run += 1;
            } else {
                run = 1;
            }
            denom *= BigInt::from(run);
        }
        factorial(self.0.len()) / denom
    }

    /// Multiset union.
    pub fn merge(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        MultiIndex(v)
    }

    /// All sorted multi-indices of length `k` over `0..=n`, in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<MultiIndex> {
        fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == k {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for i in start..=n {
                cur.push(i);
                rec(n, k, i, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, k, 0, &mut Vec::with_capacity(k), &mut out);
        out
    }

    /// Every way to split this multiset as `a ∪ rest` with `|a| = r`, each
    /// distinct sub-multiset `a` listed once.
    pub fn splits(&self, r: usize) -> Vec<(MultiIndex, MultiIndex)> {
        // (value, count) runs
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for &e in &self.0 {
            match runs.last_mut() {
                Some((v, c)) if *v == e => *c += 1,
                _ => runs.push((e, 1)),
            }
        }
        fn rec(
            runs: &[(usize, usize)],
            r: usize,
            a: &mut Vec<usize>,
            rest: &mut Vec<usize>,
            out: &mut Vec<(MultiIndex, MultiIndex)>,
        ) {
            let Some((&(v, c), tail)) = runs.split_first() else {
                if r == 0 {
                    out.push((MultiIndex(a.clone()), MultiIndex(rest.clone())));
                }
                return;
            };
            for take in 0..=c.min(r) {
                let (al, rl) = (a.len(), rest.len());
                a.extend(std::iter::repeat_n(v, take));
                rest.extend(std::iter::repeat_n(v, c - take));
                rec(tail, r - take, a, rest, out);
                a.truncate(al);
                rest.truncate(rl);
            }
        }
        let mut out = Vec::new();
        if r <= self.len() {
            rec(&runs, r, &mut Vec::new(), &mut Vec::new(), &mut out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::binomial;

    #[test]
    fn multiplicities() {
        let m = |v: Vec<usize>| MultiIndex::new(v, 3).unwrap().multiplicity();
        assert_eq!(m(vec![]), BigInt::from(1));
        assert_eq!(m(vec![0, 1]), BigInt::from(2));
        assert_eq!(m(vec![1, 0, 1]), BigInt::from(3));
        assert_eq!(m(vec![2, 2, 2]), BigInt::from(1));
        assert_eq!(m(vec![0, 1, 2, 3]), BigInt::from(24));
    }

    #[test]
    fn range_checked() {
        assert!(matches!(
            MultiIndex::new(vec![0, 2], 1),
            Err(Error::IndexOutOfRange { index: 2, n: 1 })
        ));
    }

    #[test]
    fn enumeration_counts() {
        for n in 1..4 {
            for k in 0..5 {
                let all = MultiIndex::all(n, k);
                assert_eq!(BigInt::from(all.len()), binomial(n + k, k));
                // multiplicities sum to (n+1)^k
                let total: BigInt = all.iter().map(|m| m.multiplicity()).sum();
                assert_eq!(total, BigInt::from((n + 1).pow(k as u32)));
            }
        }
    }

    #[test]
    fn splits_are_distinct_and_complete() {
        let m = MultiIndex::new(vec![0, 0, 1, 2], 2).unwrap();
        let s = m.splits(2);
        // {0,0},{0,1},{0,2},{1,2}
        assert_eq!(s.len(), 4);
        for (a, rest) in &s {
            assert_eq!(a.merge(rest), m);
        }
        assert_eq!(m.splits(0), vec![(MultiIndex::empty(), m.clone())]);
        assert!(m.splits(5).is_empty());
    }

    #[test]
    fn exponent_roundtrip() {
        let m = MultiIndex::new(vec![2, 0, 2], 3).unwrap();
        assert_eq!(m.exponents(3), vec![1, 0, 2, 0]);
        assert_eq!(MultiIndex::from_exponents(&m.exponents(3)), m);
    }
}
