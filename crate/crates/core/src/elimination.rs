//! Fraction-free row reduction over the integers with sparse rows.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type SparseRow<K> = BTreeMap<K, BigInt>;

/// Divides out the content and makes the first coefficient positive.
pub fn make_primitive<K: Ord>(row: &mut SparseRow<K>) {
    let mut g = BigInt::zero();
    for c in row.values() {
        g = g.gcd(c);
        if g == BigInt::from(1) {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    let negate = row.values().next().is_some_and(|c| c.is_negative());
    if negate {
        g = -g;
    }
    if g != BigInt::from(1) {
        for c in row.values_mut() {
            *c /= &g;
        }
    }
}

/// `a * dst - b * src`, dropping zeros.
fn combine<K: Ord + Clone>(dst: &mut SparseRow<K>, a: &BigInt, src: &SparseRow<K>, b: &BigInt) {
    if *a != BigInt::from(1) {
        for c in dst.values_mut() {
            *c *= a;
        }
    }
    for (k, s) in src {
        let e = dst.entry(k.clone()).or_insert_with(BigInt::zero);
        *e -= s * b;
        if e.is_zero() {
            dst.remove(k);
        }
    }
}

/// Reduced echelon basis of a row space; the pivot of a row is its first key.
#[derive(Clone, Debug)]
pub struct RowSpace<K: Ord + Clone> {
    rows: BTreeMap<K, SparseRow<K>>,
}

impl<K: Ord + Clone> Default for RowSpace<K> {
    fn default() -> Self {
        RowSpace { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> RowSpace<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow<K>> {
        self.rows.values()
    }

    /// Reduces `v` against the basis without inserting it.
    pub fn reduce(&self, mut v: SparseRow<K>) -> SparseRow<K> {
        let hits: Vec<K> = v.keys().filter(|k| self.rows.contains_key(*k)).cloned().collect();
        for p in hits {
            let Some(b) = v.get(&p).cloned() else { continue };
            let row = &self.rows[&p];
            let a = &row[&p];
            let g = a.gcd(&b);
            combine(&mut v, &(a / &g), row, &(&b / &g));
        }
        make_primitive(&mut v);
        v
    }

    pub fn contains(&self, v: SparseRow<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns its reduced form when it was independent.
    pub fn insert(&mut self, v: SparseRow<K>) -> Option<SparseRow<K>> {
        let v = self.reduce(v);
        let p = v.keys().next()?.clone();
        let a = v[&p].clone();
        for row in self.rows.values_mut() {
            if let Some(b) = row.get(&p).cloned() {
                let g = a.gcd(&b);
                combine(row, &(&a / &g), &v, &(&b / &g));
                make_primitive(row);
            }
        }
        self.rows.insert(p, v.clone());
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn row(entries: &[(u32, i64)]) -> SparseRow<u32> {
        entries.iter().filter(|e| e.1 != 0).map(|&(k, c)| (k, BigInt::from(c))).collect()
    }

    // Dense rational elimination as an independent rank oracle.
    fn dense_rank(m: &[Vec<i64>]) -> usize {
        use num_rational::BigRational;
        let mut a: Vec<Vec<BigRational>> =
            m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
        let (n, cols) = (a.len(), a.first().map_or(0, |r| r.len()));
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..n).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(rank, p);
            for i in 0..n {
                if i != rank && !a[i][c].is_zero() {
                    let f = &a[i][c] / &a[rank][c];
                    for k in 0..cols {
                        let t = &a[rank][k] * &f;
                        a[i][k] -= t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_and_membership() {
        let mut s = RowSpace::new();
        assert!(s.insert(row(&[(0, 2), (1, 4)])).is_some());
        assert!(s.insert(row(&[(0, 3), (1, 6)])).is_none());
        assert!(s.insert(row(&[(1, 1), (2, 5)])).is_some());
        assert_eq!(s.rank(), 2);
        assert!(s.contains(row(&[(0, 1), (2, -10)])));
        assert!(!s.contains(row(&[(2, 1)])));
        // reduced echelon: no pivot appears in another row
        for r in s.rows() {
            let p = r.keys().next().unwrap();
            assert_eq!(s.rows().filter(|o| o.contains_key(p)).count(), 1);
        }
    }

    #[test]
    fn agrees_with_dense_rank() {
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 7) as i64 - 3
        };
        for _ in 0..50 {
            let m: Vec<Vec<i64>> = (0..5).map(|_| (0..6).map(|_| next()).collect()).collect();
            let mut s = RowSpace::new();
            for r in &m {
                s.insert(r.iter().enumerate().filter(|e| *e.1 != 0).map(|(k, &c)| (k as u32, BigInt::from(c))).collect());
            }
            assert_eq!(s.rank(), dense_rank(&m));
        }
    }
}
