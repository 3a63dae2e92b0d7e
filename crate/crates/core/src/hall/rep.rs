//! Quiver representations over a finite field: shapes, codes, homomorphisms.

use alloc::vec;
use alloc::vec::Vec;

use crate::cartan::Quiver;
use crate::field::{FiniteField, Fq, Mat};

/// Vector spaces per vertex and a matrix per arrow (target dim x source dim).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation {
    pub dims: Vec<usize>,
    pub maps: Vec<Mat>,
}

/// Number of matrix entries of a representation with the given dimensions.
pub fn entry_count(quiver: &Quiver, dims: &[usize]) -> usize {
    quiver.arrows().iter().map(|a| dims[a.target] * dims[a.source]).sum()
}

impl Representation {
    pub fn zero(quiver: &Quiver, dims: &[usize]) -> Self {
        let maps = quiver.arrows().iter().map(|a| Mat::zero(dims[a.target], dims[a.source])).collect();
        Representation { dims: dims.to_vec(), maps }
    }

    /// The simple representation at vertex `v`.
    pub fn simple(quiver: &Quiver, v: usize) -> Self {
        let mut dims = vec![0; quiver.vertices().len()];
        dims[v] = 1;
        Representation::zero(quiver, &dims)
    }

    pub fn has_shape(&self, quiver: &Quiver) -> bool {
        self.dims.len() == quiver.vertices().len()
            && self.maps.len() == quiver.arrows().len()
            && quiver
                .arrows()
                .iter()
                .zip(&self.maps)
                .all(|(a, m)| m.rows == self.dims[a.target] && m.cols == self.dims[a.source])
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = Fq> + '_ {
        self.maps.iter().flat_map(|m| m.data.iter().copied())
    }

    /// Base-`q` number with the first entry most significant.
    pub fn encode(&self, q: u64) -> u64 {
        self.entries().fold(0u64, |acc, e| acc * q + e as u64)
    }

    pub fn decode(quiver: &Quiver, dims: &[usize], q: u64, mut code: u64) -> Self {
        let mut rep = Representation::zero(quiver, dims);
        for m in rep.maps.iter_mut().rev() {
            for x in m.data.iter_mut().rev() {
                *x = (code % q) as Fq;
                code /= q;
            }
        }
        rep
    }

    /// Block-diagonal sum, `self` first at every vertex.
    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| Mat::blocks(a, &Mat::zero(a.rows, b.cols), &Mat::zero(b.rows, a.cols), b))
            .collect();
        Representation { dims, maps }
    }

    /// Images of all paths of length `k` shrink to zero for some `k`; tested
    /// by iterating the sum of arrow images starting from the whole space.
    pub fn is_nilpotent(&self, quiver: &Quiver, field: &FiniteField) -> bool {
        if !quiver.has_oriented_cycle() {
            return true;
        }
        let mut span: Vec<Mat> = self.dims.iter().map(|&d| Mat::identity(d)).collect();
        for _ in 0..=self.total_dim() {
            if span.iter().all(|s| s.cols == 0) {
                return true;
            }
            let mut next: Vec<Mat> = self.dims.iter().map(|&d| Mat::zero(d, 0)).collect();
            for (a, m) in quiver.arrows().iter().zip(&self.maps) {
                let img = m.mul(field, &span[a.source]);
                next[a.target] = hconcat(&next[a.target], &img);
            }
            span = next.iter().map(|s| s.column_space(field)).collect();
        }
        span.iter().all(|s| s.cols == 0)
    }

    /// Restriction to subspaces given by column bases that the arrows preserve.
    pub fn restrict(&self, quiver: &Quiver, field: &FiniteField, bases: &[Mat]) -> Representation {
        let dims = bases.iter().map(|b| b.cols).collect();
        let maps = quiver
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| {
                let img = m.mul(field, &bases[a.source]);
                bases[a.target].solve(field, &img).expect("subspace is arrow-stable")
            })
            .collect();
        Representation { dims, maps }
    }
}

pub(crate) fn hconcat(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.rows, b.rows);
    let mut out = Mat::zero(a.rows, a.cols + b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.set(i, j, a.get(i, j));
        }
        for j in 0..b.cols {
            out.set(i, a.cols + j, b.get(i, j));
        }
    }
    out
}

/// Basis of `Hom(m, n)`: vertex-wise tuples intertwining every arrow.
pub fn hom_basis(quiver: &Quiver, field: &FiniteField, m: &Representation, n: &Representation) -> Vec<Vec<Mat>> {
    let nv = m.dims.len();
    let mut offset = vec![0usize; nv + 1];
    for v in 0..nv {
        offset[v + 1] = offset[v] + n.dims[v] * m.dims[v];
    }
    let unknowns = offset[nv];
    let var = |v: usize, i: usize, k: usize| offset[v] + i * m.dims[v] + k;
    let eq_count: usize = quiver.arrows().iter().map(|a| n.dims[a.target] * m.dims[a.source]).sum();
    let mut system = Mat::zero(eq_count, unknowns);
    let mut row = 0;
    for (ai, a) in quiver.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (am, an) = (&m.maps[ai], &n.maps[ai]);
        for i in 0..n.dims[t] {
            for j in 0..m.dims[s] {
                // (phi_t A^M)_{ij} - (A^N phi_s)_{ij}
                for k in 0..m.dims[t] {
                    let c = am.get(k, j);
                    if c != 0 {
                        let x = var(t, i, k);
                        system.set(row, x, field.add(system.get(row, x), c));
                    }
                }
                for k in 0..n.dims[s] {
                    let c = an.get(i, k);
                    if c != 0 {
                        let x = var(s, k, j);
                        system.set(row, x, field.sub(system.get(row, x), c));
                    }
                }
                row += 1;
            }
        }
    }
    let kernel = system.kernel(field);
    (0..kernel.cols)
        .map(|c| {
            (0..nv)
                .map(|v| {
                    let mut phi = Mat::zero(n.dims[v], m.dims[v]);
                    for i in 0..n.dims[v] {
                        for k in 0..m.dims[v] {
                            phi.set(i, k, kernel.get(var(v, i, k), c));
                        }
                    }
                    phi
                })
                .collect()
        })
        .collect()
}

/// `sum_k coeffs[k] * basis[k]`, vertex-wise.
pub fn combination(field: &FiniteField, basis: &[Vec<Mat>], coeffs: &[Fq]) -> Vec<Mat> {
    let mut acc: Vec<Mat> = basis[0].iter().map(|m| Mat::zero(m.rows, m.cols)).collect();
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (x, y) in acc.iter_mut().zip(b) {
            for (e, &f) in x.data.iter_mut().zip(&y.data) {
                *e = field.add(*e, field.mul(c, f));
            }
        }
    }
    acc
}

/// Advances a base-`q` counter; false after the last value.
pub(crate) fn increment(digits: &mut [Fq], q: Fq) -> bool {
    for d in digits.iter_mut() {
        if *d + 1 < q {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// Ranks of compositions along every path of length at most the total
/// dimension, at most `limit` paths, in a fixed order.
pub fn path_ranks(quiver: &Quiver, field: &FiniteField, rep: &Representation, limit: usize) -> Vec<usize> {
    let mut out: Vec<usize> = rep.dims.clone();
    let mut frontier: Vec<(usize, Mat)> = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| (a.target, rep.maps[ai].clone()))
        .collect();
    let mut length = 1;
    while !frontier.is_empty() && length <= rep.total_dim() && out.len() < limit {
        let mut next = Vec::new();
        for (end, m) in &frontier {
            out.push(m.rank(field));
            if out.len() >= limit {
                break;
            }
            if m.rows == 0 || m.cols == 0 {
                continue;
            }
            for (ai, a) in quiver.arrows().iter().enumerate() {
                if a.source == *end {
                    next.push((a.target, rep.maps[ai].mul(field, m)));
                }
            }
        }
        frontier = next;
        length += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        let q = Quiver::kronecker();
        let f = FiniteField::new(3, 1).unwrap();
        for code in 0..3u64.pow(4) {
            let r = Representation::decode(&q, &[2, 1], 3, code);
            assert!(r.has_shape(&q));
            assert_eq!(r.encode(3), code);
            assert!(r.is_nilpotent(&q, &f));
        }
    }

    #[test]
    fn jordan_nilpotent_count() {
        let q = Quiver::jordan();
        let f = FiniteField::new(2, 1).unwrap();
        let n = (0..16u64).filter(|&c| Representation::decode(&q, &[2], 2, c).is_nilpotent(&q, &f)).count();
        assert_eq!(n, 4);
    }

    #[test]
    fn hom_dimensions() {
        let q = Quiver::jordan();
        let f = FiniteField::new(2, 1).unwrap();
        let j2 = Representation { dims: vec![2], maps: vec![Mat::from_rows(2, 2, vec![0, 0, 1, 0])] };
        let z2 = Representation::zero(&q, &[2]);
        assert_eq!(hom_basis(&q, &f, &j2, &j2).len(), 2);
        assert_eq!(hom_basis(&q, &f, &z2, &z2).len(), 4);
        assert_eq!(hom_basis(&q, &f, &j2, &z2).len(), 2);
        for phi in hom_basis(&q, &f, &j2, &j2) {
            assert_eq!(phi[0].mul(&f, &j2.maps[0]), j2.maps[0].mul(&f, &phi[0]));
        }
    }
}
