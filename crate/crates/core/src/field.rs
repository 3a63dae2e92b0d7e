//! Small finite fields by lookup tables, and dense matrices over them.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// An element, encoded as `sum c_k p^k` for the polynomial `sum c_k t^k`.
pub type Fq = u16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u32),
    PrimeTooLarge(u32),
    ExponentOutOfRange(u32),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::PrimeTooLarge(p) => write!(f, "characteristic {p} exceeds 7"),
            FieldError::ExponentOutOfRange(r) => write!(f, "exponent {r} outside 1..=3"),
        }
    }
}

impl core::error::Error for FieldError {}

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    r: u32,
    q: u32,
    add: Vec<Fq>,
    mul: Vec<Fq>,
    neg: Vec<Fq>,
    inv: Vec<Fq>,
    primitive: Fq,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r
    }
}

impl Eq for FiniteField {}

fn digits(x: u32, p: u32, r: u32) -> Vec<u32> {
    (0..r).map(|k| (x / p.pow(k)) % p).collect()
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Smallest monic polynomial of degree `r` without roots; for `r <= 3` this is irreducible.
fn irreducible(p: u32, r: u32) -> Vec<u32> {
    for tail in 0..p.pow(r) {
        let mut poly = digits(tail, p, r);
        poly.push(1);
        let has_root = (0..p).any(|x| poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0);
        if !has_root {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn new(p: u32, r: u32) -> Result<Self, FieldError> {
        if p < 2 || (2..p).any(|d| p.is_multiple_of(d)) {
            return Err(FieldError::NotPrime(p));
        }
        if p > 7 {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !(1..=3).contains(&r) {
            return Err(FieldError::ExponentOutOfRange(r));
        }
        let q = p.pow(r);
        let modulus = if r == 1 { vec![0, 1] } else { irreducible(p, r) };
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            let da = digits(a, p, r);
            for b in 0..q {
                let db = digits(b, p, r);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = from_digits(&s, p) as Fq;
                let mut prod = vec![0u32; 2 * r as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (r as usize..prod.len()).rev() {
                    let c = prod[k];
                    if c != 0 {
                        for (j, m) in modulus.iter().enumerate() {
                            let idx = k - r as usize + j;
                            prod[idx] = (prod[idx] + (p - c) * m) % p;
                        }
                    }
                }
                mul[(a * q + b) as usize] = from_digits(&prod[..r as usize], p) as Fq;
            }
        }
        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b as Fq;
                }
                if mul[a * n + b] == 1 {
                    inv[a] = b as Fq;
                }
            }
        }
        let mut field = FiniteField { p, r, q, add, mul, neg, inv, primitive: 1 };
        field.primitive = (1..q as Fq)
            .find(|&g| {
                let mut x = g;
                let mut order = 1;
                while x != 1 {
                    x = field.mul(x, g);
                    order += 1;
                }
                order == q - 1
            })
            .unwrap_or(1);
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.r
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// A generator of the multiplicative group.
    pub fn primitive(&self) -> Fq {
        self.primitive
    }

    /// The class of `t` in `F_p[t]/(modulus)`; `None` over a prime field.
    pub fn theta(&self) -> Option<Fq> {
        (self.r > 1).then_some(self.p as Fq)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: Fq) -> Fq {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    /// Base-`p` digits of an element, lowest first.
    pub fn digits(&self, a: Fq) -> Vec<u32> {
        digits(a as u32, self.p, self.r)
    }

    pub fn from_digits(&self, d: &[u32]) -> Fq {
        from_digits(d, self.p) as Fq
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.r)
    }
}

/// Row-major dense matrix over a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fq>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Fq>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, f: &FiniteField, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add(&self, f: &FiniteField, other: &Mat) -> Mat {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &FiniteField, c: Fq) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self, f: &FiniteField) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let a = m.get(i, c);
                if i != r && a != 0 {
                    for j in 0..m.cols {
                        let v = f.sub(m.get(i, j), f.mul(a, m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        self.rref(f).1.len()
    }

    pub fn is_invertible(&self, f: &FiniteField) -> bool {
        self.is_square() && self.rank(f) == self.rows
    }

    /// Basis of `{x : self * x = 0}`, as columns of the returned matrix.
    pub fn kernel(&self, f: &FiniteField) -> Mat {
        let (m, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zero(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.neg(m.get(i, fc)));
            }
        }
        out
    }

    /// Basis of the column space, as columns.
    pub fn column_space(&self, f: &FiniteField) -> Mat {
        let (_, pivots) = self.rref(f);
        let mut out = Mat::zero(self.rows, pivots.len());
        for (k, &c) in pivots.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, k, self.get(i, c));
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Solves `self * x = rhs` for `self` of full column rank; `None` if inconsistent.
    pub fn solve(&self, f: &FiniteField, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows);
        let mut aug = Mat::zero(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            for j in 0..rhs.cols {
                aug.set(i, self.cols + j, rhs.get(i, j));
            }
        }
        let (m, pivots) = aug.rref(f);
        if pivots.iter().any(|&c| c >= self.cols) || pivots.len() < self.cols {
            return None;
        }
        let mut x = Mat::zero(self.cols, rhs.cols);
        for (i, &c) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(c, j, m.get(i, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn inverse(&self, f: &FiniteField) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        self.solve(f, &Mat::identity(self.rows))
    }

    pub fn pow(&self, f: &FiniteField, k: usize) -> Mat {
        let mut acc = Mat::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(f, self);
        }
        acc
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn blocks(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        let (r1, r2, c1, c2) = (a.rows, c.rows, a.cols, b.cols);
        let mut out = Mat::zero(r1 + r2, c1 + c2);
        for (blk, ro, co) in [(a, 0, 0), (b, 0, c1), (c, r1, 0), (d, r1, c1)] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    out.set(ro + i, co + j, blk.get(i, j));
                }
            }
        }
        out
    }
}

/// Number of invertible `n x n` matrices over a field with `q` elements.
pub fn gl_order(q: u128, n: u32) -> Option<u128> {
    let qn = q.checked_pow(n)?;
    (0..n).try_fold(1u128, |acc, k| acc.checked_mul(qn - q.pow(k)))
}

/// All `k`-dimensional subspaces of `F^n`, each as its reduced echelon basis (`k x n`).
pub fn subspaces(f: &FiniteField, n: usize, k: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    let q = f.order() as Fq;
    let mut pivots: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        // free positions: (row i, column c) with c > pivot_i and c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| ((pivots[i] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let mut values = vec![0 as Fq; free.len()];
        loop {
            let mut m = Mat::zero(k, n);
            for (i, &p) in pivots.iter().enumerate() {
                m.set(i, p, 1);
            }
            for (&(i, c), &v) in free.iter().zip(&values) {
                m.set(i, c, v);
            }
            out.push(m);
            let mut idx = 0;
            while idx < values.len() && values[idx] == q - 1 {
                values[idx] = 0;
                idx += 1;
            }
            if idx == values.len() {
                break;
            }
            values[idx] += 1;
        }
        // next combination of pivot columns
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms() {
        for (p, r) in [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (7, 1)] {
            let f = FiniteField::new(p, r).unwrap();
            let q = f.order() as Fq;
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
            // the primitive element has order q - 1
            let g = f.primitive();
            let mut seen = std::collections::BTreeSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len(), (q - 1) as usize);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(FiniteField::new(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(FiniteField::new(11, 1), Err(FieldError::PrimeTooLarge(11)));
        assert_eq!(FiniteField::new(2, 4), Err(FieldError::ExponentOutOfRange(4)));
    }

    // Gaussian binomial coefficient.
    fn gauss(q: u64, n: u32, k: u32) -> u64 {
        let num: u64 = (0..k).map(|i| q.pow(n - i) - 1).product();
        let den: u64 = (0..k).map(|i| q.pow(i + 1) - 1).product();
        num / den
    }

    #[test]
    fn subspace_counts() {
        for (p, r) in [(2, 1), (3, 1), (2, 2)] {
            let f = FiniteField::new(p, r).unwrap();
            let q = f.order() as u64;
            for n in 0..=4usize {
                for k in 0..=n {
                    let subs = subspaces(&f, n, k);
                    assert_eq!(subs.len() as u64, gauss(q, n as u32, k as u32), "q={q} n={n} k={k}");
                    let mut dedup = subs.clone();
                    dedup.sort();
                    dedup.dedup();
                    assert_eq!(dedup.len(), subs.len());
                }
            }
        }
    }

    #[test]
    fn linear_algebra() {
        let f = FiniteField::new(3, 1).unwrap();
        let a = Mat::from_rows(2, 3, vec![1, 2, 0, 2, 1, 0]);
        assert_eq!(a.rank(&f), 1);
        let k = a.kernel(&f);
        assert_eq!(k.cols, 2);
        assert!(a.mul(&f, &k).is_zero());
        let b = Mat::from_rows(2, 2, vec![1, 1, 0, 1]);
        let bi = b.inverse(&f).unwrap();
        assert_eq!(b.mul(&f, &bi), Mat::identity(2));
        assert_eq!(gl_order(2, 2), Some(6));
        assert_eq!(gl_order(3, 2), Some(48));
    }
}
