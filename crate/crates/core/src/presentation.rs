//! Lie algebras given by generators and relators: graded dimensions of the
//! quotient, exactly for multigraded ideals and by truncation otherwise.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cartan::{CartanMatrix, Sign, SignedIndex};
use crate::elimination::{RowSpace, SparseRow};
use crate::freelie::{
    content, evaluate, kernel_relators, lyndon_words, serre_relators, Alphabet, FreeLie, FreeLieElement, LieModel,
    Word,
};

pub type Degree = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresentationError {
    GradingShape,
    Inhomogeneous { relator: usize },
    AlphabetMismatch { relator: usize },
    CutoffTooSmall(usize),
}

impl fmt::Display for PresentationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationError::GradingShape => f.write_str("grading must assign one tuple of common length per generator"),
            PresentationError::Inhomogeneous { relator } => write!(f, "relator {} is not homogeneous", relator + 1),
            PresentationError::AlphabetMismatch { relator } => {
                write!(f, "relator {} uses letters outside the alphabet", relator + 1)
            }
            PresentationError::CutoffTooSmall(n) => write!(f, "cutoff {n} is below 2"),
        }
    }
}

impl core::error::Error for PresentationError {}

/// Generators, a coarse grading of the generators, and relators.
#[derive(Clone, Debug)]
pub struct Presentation {
    alphabet: Alphabet,
    grading: Vec<Degree>,
    relators: Vec<FreeLieElement>,
}

impl Presentation {
    /// Checks that every relator is homogeneous for the grading.
    pub fn new(alphabet: Alphabet, grading: Vec<Degree>, relators: Vec<FreeLieElement>) -> Result<Self, PresentationError> {
        let width = grading.first().map_or(0, |g| g.len());
        if grading.len() != alphabet.rank() || grading.iter().any(|g| g.len() != width) {
            return Err(PresentationError::GradingShape);
        }
        let p = Presentation { alphabet, grading, relators };
        for (k, r) in p.relators.iter().enumerate() {
            if r.max_letter().is_some_and(|l| l as usize >= p.alphabet.rank()) {
                return Err(PresentationError::AlphabetMismatch { relator: k });
            }
            let mut degs = r.terms().map(|(w, _)| p.degree_of(w));
            if let Some(d) = degs.next() {
                if degs.any(|e| e != d) {
                    return Err(PresentationError::Inhomogeneous { relator: k });
                }
            }
        }
        Ok(p)
    }

    /// Free presentation graded by multidegree.
    pub fn free(alphabet: Alphabet) -> Self {
        let n = alphabet.rank();
        let grading = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Presentation { alphabet, grading, relators: Vec::new() }
    }

    /// `n+(C)`: plain alphabet, multidegree grading, Serre relators.
    pub fn positive_part(c: &CartanMatrix) -> Self {
        let set = serre_relators(c, false);
        let mut p = Presentation::free(set.alphabet().clone());
        p.relators = set.relators().iter().map(|r| r.element.clone()).collect();
        p
    }

    /// Doubled alphabet graded by `x+_i -> e_i`, `x-_i -> -e_i`, with the doubled
    /// Serre relators and the torus and weight relators.
    pub fn doubled_quotient(c: &CartanMatrix) -> Self {
        let n = c.size();
        let mut set = serre_relators(c, true);
        set.extend(&kernel_relators(c));
        let grading = SignedIndex::all(n)
            .map(|s| {
                let mut d = vec![0i64; n];
                d[s.base] = if s.sign == Sign::Plus { 1 } else { -1 };
                d
            })
            .collect();
        Presentation::new(set.alphabet().clone(), grading, set.relators().iter().map(|r| r.element.clone()).collect())
            .expect("doubled relators are homogeneous")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[FreeLieElement] {
        &self.relators
    }

    pub fn grading_width(&self) -> usize {
        self.grading.first().map_or(0, |g| g.len())
    }

    pub fn degree_of(&self, w: &[u8]) -> Degree {
        let mut d = vec![0i64; self.grading_width()];
        for &c in w {
            for (x, g) in d.iter_mut().zip(&self.grading[c as usize]) {
                *x += g;
            }
        }
        d
    }

    fn generator_degree(&self, g: usize) -> &Degree {
        &self.grading[g]
    }
}

/// Integer row proportional to `x`.
fn integer_row(x: &FreeLieElement) -> Vec<(Word, BigInt)> {
    let l = x.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    x.terms().map(|(w, c)| (w.clone(), (c * BigRational::from_integer(l.clone())).to_integer())).collect()
}

/// Dimensions per degree with a stability flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDimensionTable {
    pub cutoff: usize,
    pub entries: BTreeMap<Degree, (u64, bool)>,
}

impl GradedDimensionTable {
    pub fn dim(&self, d: &[i64]) -> u64 {
        self.entries.get(d).map_or(0, |e| e.0)
    }

    pub fn is_stable(&self, d: &[i64]) -> bool {
        self.entries.get(d).is_none_or(|e| e.1)
    }

    pub fn total(&self) -> u64 {
        self.entries.values().map(|e| e.0).sum()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&Degree, u64)> {
        self.entries.iter().filter(|e| e.1 .0 > 0).map(|(d, e)| (d, e.0))
    }
}

/// Exact dimensions of the quotient in every multidegree of total degree at most `cutoff`.
pub fn graded_dims_exact(p: &Presentation, cutoff: usize) -> Result<GradedDimensionTable, PresentationError> {
    let rank = p.alphabet.rank();
    let lie = FreeLie::new(p.alphabet.clone());
    let mut relators: BTreeMap<Vec<u32>, Vec<&FreeLieElement>> = BTreeMap::new();
    for (k, r) in p.relators.iter().enumerate() {
        if r.max_letter().is_some_and(|l| l as usize >= rank) {
            return Err(PresentationError::AlphabetMismatch { relator: k });
        }
        let d = r.multidegree(rank).ok_or(PresentationError::Inhomogeneous { relator: k })?;
        relators.entry(d).or_default().push(r);
    }
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for w in lyndon_words(rank, cutoff) {
        *counts.entry(content(&w, rank)).or_default() += 1;
    }
    let mut by_total: Vec<Vec<&Vec<u32>>> = vec![Vec::new(); cutoff + 1];
    for d in counts.keys() {
        by_total[d.iter().sum::<u32>() as usize].push(d);
    }
    let mut spans: BTreeMap<Vec<u32>, RowSpace<Word>> = BTreeMap::new();
    let mut entries = BTreeMap::new();
    for level in by_total {
        for d in level {
            let mut span = RowSpace::new();
            for r in relators.get(d).into_iter().flatten() {
                span.insert(integer_row(r).into_iter().collect());
            }
            for g in 0..rank {
                if d[g] == 0 {
                    continue;
                }
                let mut lower = d.clone();
                lower[g] -= 1;
                if let Some(below) = spans.get(&lower) {
                    for row in below.rows() {
                        let terms: Vec<(Word, BigInt)> = row.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
                        span.insert(lie.ad_generator(g as u8, &terms));
                    }
                }
            }
            let dim = counts[d] - span.rank() as u64;
            entries.insert(d.iter().map(|&x| x as i64).collect(), (dim, true));
            if span.rank() > 0 {
                spans.insert(d.clone(), span);
            }
        }
    }
    Ok(GradedDimensionTable { cutoff, entries })
}

/// Columns ordered by total degree descending, then by word.
type Column = (Reverse<usize>, Word);

fn quotient_dims_at(p: &Presentation, cutoff: usize) -> BTreeMap<Degree, u64> {
    let rank = p.alphabet.rank();
    let lie = FreeLie::new(p.alphabet.clone());
    let mut counts: BTreeMap<Degree, u64> = BTreeMap::new();
    for w in lyndon_words(rank, cutoff) {
        *counts.entry(p.degree_of(&w)).or_default() += 1;
    }
    let mut spans: BTreeMap<Degree, RowSpace<Column>> = BTreeMap::new();
    let mut queue: VecDeque<(Degree, SparseRow<Column>)> = VecDeque::new();
    for r in &p.relators {
        let row: SparseRow<Column> =
            integer_row(r).into_iter().map(|(w, c)| ((Reverse(w.len()), w), c)).collect();
        if row.keys().next().is_some_and(|k| k.0 .0 <= cutoff) {
            let d = p.degree_of(&row.keys().next().unwrap().1);
            queue.push_back((d, row));
        }
    }
    while let Some((d, row)) = queue.pop_front() {
        let Some(reduced) = spans.entry(d.clone()).or_default().insert(row) else { continue };
        let top = reduced.keys().next().unwrap().0 .0;
        if top >= cutoff {
            continue;
        }
        let terms: Vec<(Word, BigInt)> = reduced.into_iter().map(|(k, c)| (k.1, c)).collect();
        for g in 0..rank {
            let image: SparseRow<Column> =
                lie.ad_generator(g as u8, &terms).into_iter().map(|(w, c)| ((Reverse(w.len()), w), c)).collect();
            if image.is_empty() {
                continue;
            }
            let e: Degree = d.iter().zip(p.generator_degree(g)).map(|(a, b)| a + b).collect();
            queue.push_back((e, image));
        }
    }
    counts.into_iter().map(|(d, n)| {
        let r = spans.get(&d).map_or(0, |s| s.rank() as u64);
        (d, n - r)
    }).collect()
}

/// Truncated dimensions per coarse degree: free dimension in total degree at
/// most `cutoff` minus the rank of the ideal built within that window.
pub fn quotient_dims_truncated(p: &Presentation, cutoff: usize) -> Result<GradedDimensionTable, PresentationError> {
    if cutoff < 2 {
        return Err(PresentationError::CutoffTooSmall(cutoff));
    }
    let now = quotient_dims_at(p, cutoff);
    let before = quotient_dims_at(p, cutoff - 1);
    let entries = now
        .into_iter()
        .map(|(d, n)| {
            let stable = before.get(&d).copied().unwrap_or(0) == n;
            (d, (n, stable))
        })
        .collect();
    Ok(GradedDimensionTable { cutoff, entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Agreement {
    Match,
    Unstable,
    Mismatch,
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Agreement::Match => "MATCH",
            Agreement::Unstable => "UNSTABLE",
            Agreement::Mismatch => "MISMATCH",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeComparison {
    pub degree: Degree,
    pub computed: u64,
    pub expected: u64,
    pub status: Agreement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientReport {
    pub cutoff: usize,
    pub rows: Vec<DegreeComparison>,
}

impl QuotientReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.status == Agreement::Match)
    }

    pub fn row(&self, d: &[i64]) -> Option<&DegreeComparison> {
        self.rows.iter().find(|r| r.degree == d)
    }
}

/// Compares the truncated quotient of the doubled presentation with the
/// multiplicities of `n+(C)`; degree zero is expected to have dimension `|I|`.
/// Rows cover degrees of total absolute degree below the cutoff, the ones
/// already present one cutoff earlier.
pub fn verify_quotient(c: &CartanMatrix, cutoff: usize) -> Result<QuotientReport, PresentationError> {
    if cutoff < 2 {
        return Err(PresentationError::CutoffTooSmall(cutoff));
    }
    let table = quotient_dims_truncated(&Presentation::doubled_quotient(c), cutoff)?;
    let oracle = graded_dims_exact(&Presentation::positive_part(c), cutoff)?;
    let rows = table
        .entries
        .iter()
        .filter(|(d, _)| d.iter().map(|x| x.unsigned_abs()).sum::<u64>() < cutoff as u64)
        .map(|(d, &(computed, stable))| {
            let expected = if d.iter().all(|&x| x == 0) {
                c.size() as u64
            } else if d.iter().all(|&x| x >= 0) {
                oracle.dim(d)
            } else if d.iter().all(|&x| x <= 0) {
                let neg: Degree = d.iter().map(|x| -x).collect();
                oracle.dim(&neg)
            } else {
                0
            };
            let status = match (stable, computed == expected) {
                (false, _) => Agreement::Unstable,
                (true, true) => Agreement::Match,
                (true, false) => Agreement::Mismatch,
            };
            DegreeComparison { degree: d.clone(), computed, expected, status }
        })
        .collect();
    Ok(QuotientReport { cutoff, rows })
}

type Mat2 = [[BigRational; 2]; 2];

/// 2x2 rational matrices under the commutator.
pub struct Sl2Matrices;

fn mat(a: [[i64; 2]; 2]) -> Mat2 {
    a.map(|r| r.map(|x| BigRational::from_integer(x.into())))
}

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

impl LieModel for Sl2Matrices {
    type Value = Mat2;
    type Error = core::convert::Infallible;

    fn bracket(&self, x: &Mat2, y: &Mat2) -> Result<Mat2, Self::Error> {
        let (xy, yx) = (mul(x, y), mul(y, x));
        Ok([[&xy[0][0] - &yx[0][0], &xy[0][1] - &yx[0][1]], [&xy[1][0] - &yx[1][0], &xy[1][1] - &yx[1][1]]])
    }

    fn combine(&self, terms: &[(BigRational, Mat2)]) -> Result<Mat2, Self::Error> {
        let mut acc = mat([[0, 0], [0, 0]]);
        for (c, m) in terms {
            for i in 0..2 {
                for j in 0..2 {
                    acc[i][j] += c * &m[i][j];
                }
            }
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Report {
    /// Each relator of the doubled presentation of `[2]` with whether its image vanishes.
    pub relators: Vec<(String, bool)>,
    /// The images of `x+`, `x-`, `[x+, x-]` span all of `sl2`.
    pub surjective: bool,
}

impl Sl2Report {
    pub fn passed(&self) -> bool {
        self.surjective && self.relators.iter().all(|r| r.1)
    }
}

/// Maps the doubled generators of `C = [2]` to `e` and `f` in `sl2`.
pub fn sl2_model_check() -> Sl2Report {
    let c = crate::cartan::validate(&[vec![2]]).unwrap();
    let p = Presentation::doubled_quotient(&c);
    let images = [mat([[0, 1], [0, 0]]), mat([[0, 0], [1, 0]])];
    let model = Sl2Matrices;
    let zero = mat([[0, 0], [0, 0]]);
    let relators = p
        .relators()
        .iter()
        .map(|r| {
            let v = evaluate(&model, r, &images).unwrap();
            (r.display(p.alphabet()), v == zero)
        })
        .collect();
    let lie = FreeLie::new(p.alphabet().clone());
    let h = lie.bracket(&FreeLieElement::generator(0), &FreeLieElement::generator(1)).unwrap();
    let hm = evaluate(&model, &h, &images).unwrap();
    let flat = |m: &Mat2| [m[0][0].clone(), m[0][1].clone(), m[1][0].clone(), m[1][1].clone()];
    let rows = [flat(&images[0]), flat(&images[1]), flat(&hm)];
    let mut span = RowSpace::<usize>::new();
    for r in rows {
        let l = r.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let row: SparseRow<usize> = r
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, (c * BigRational::from_integer(l.clone())).to_integer()))
            .collect();
        span.insert(row);
    }
    Sl2Report { relators, surjective: span.rank() == 3 }
}

/// Human-readable degree tuple.
pub fn format_degree(d: &[i64]) -> String {
    let parts: Vec<String> = d.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(","))
}
