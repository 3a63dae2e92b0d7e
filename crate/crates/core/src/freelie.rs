//! Free Lie algebras over the rationals in the Lyndon basis.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cartan::{CartanMatrix, Sign, SignedIndex};

/// A word over letters `0..rank`, ordered lexicographically (prefixes first).
pub type Word = Vec<u8>;

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|k| w < &w[k..])
}

/// Standard factorization `w = uv` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[u8]) -> Option<(&[u8], &[u8])> {
    if w.len() < 2 {
        return None;
    }
    (1..w.len()).find(|&k| is_lyndon(&w[k..])).map(|k| w.split_at(k))
}

/// All Lyndon words of length at most `max_len` over `rank` letters, in
/// lexicographic order (Duval's generation).
pub fn lyndon_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if rank == 0 || max_len == 0 {
        return out;
    }
    let top = (rank - 1) as u8;
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let len = w.len();
        while w.len() < max_len {
            let c = w[w.len() - len];
            w.push(c);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(c) => *c += 1,
            None => return out,
        }
    }
}

/// Letter counts of a word.
pub fn content(w: &[u8], rank: usize) -> Vec<u32> {
    let mut d = vec![0u32; rank];
    for &c in w {
        d[c as usize] += 1;
    }
    d
}

/// Restriction on the Lyndon basis to enumerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeBound {
    Total(usize),
    Exact(Vec<u32>),
}

/// Ordered generator labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new(labels: Vec<String>) -> Self {
        assert!(labels.len() <= u8::MAX as usize, "alphabet too large");
        Alphabet { labels }
    }

    /// `x<label>` for each index of `c`.
    pub fn plain(c: &CartanMatrix) -> Self {
        Alphabet::new(c.labels().iter().map(|l| format!("x{l}")).collect())
    }

    /// `x+<label>` for every index, then `x-<label>`.
    pub fn doubled(c: &CartanMatrix) -> Self {
        Alphabet::new(SignedIndex::all(c.size()).map(|s| format!("x{}", s.label(c.labels()))).collect())
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn lyndon_basis(&self, bound: &DegreeBound) -> Vec<Word> {
        match bound {
            DegreeBound::Total(n) => lyndon_words(self.rank(), *n),
            DegreeBound::Exact(d) => {
                let n: u32 = d.iter().sum();
                lyndon_words(self.rank(), n as usize)
                    .into_iter()
                    .filter(|w| content(w, self.rank()) == *d)
                    .collect()
            }
        }
    }

    /// Standard right bracketing of a Lyndon word, e.g. `[[a,b],b]`.
    pub fn bracketing(&self, w: &[u8]) -> String {
        match standard_factorization(w) {
            None => self.labels[w[0] as usize].clone(),
            Some((u, v)) => format!("[{},{}]", self.bracketing(u), self.bracketing(v)),
        }
    }
}

/// Rational combination of Lyndon basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeLieElement {
    terms: BTreeMap<Word, BigRational>,
}

impl FreeLieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(i: usize) -> Self {
        Self::basis(vec![i as u8])
    }

    /// The basis element of a Lyndon word.
    pub fn basis(w: Word) -> Self {
        debug_assert!(is_lyndon(&w));
        let mut terms = BTreeMap::new();
        terms.insert(w, BigRational::one());
        FreeLieElement { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, BigRational)>>(it: I) -> Self {
        let mut x = Self::zero();
        for (w, c) in it {
            x.add_term(w, c);
        }
        x
    }

    pub fn add_term(&mut self, w: Word, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[u8]) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FreeLieElement { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for (w, c) in &other.terms {
            x.add_term(w.clone(), c.clone());
        }
        x
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for (w, c) in &other.terms {
            x.add_term(w.clone(), -c);
        }
        x
    }

    pub fn neg(&self) -> Self {
        FreeLieElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    /// Common letter-count vector, or `None` for zero or mixed elements.
    pub fn multidegree(&self, rank: usize) -> Option<Vec<u32>> {
        let mut it = self.terms.keys().map(|w| content(w, rank));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn max_letter(&self) -> Option<u8> {
        self.terms.keys().flat_map(|w| w.iter().copied()).max()
    }

    /// Flip the sign so the lexicographically smallest word has a positive coefficient.
    pub fn normalized(&self) -> Self {
        match self.terms.values().next() {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if k == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            if !mag.is_one() {
                s.push_str(&format!("{mag}*"));
            }
            s.push_str(&alphabet.bracketing(w));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeLieError {
    AlphabetMismatch { letter: u8, rank: usize },
}

impl fmt::Display for FreeLieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeLieError::AlphabetMismatch { letter, rank } => {
                write!(f, "letter {letter} outside an alphabet of {rank} generators")
            }
        }
    }
}

impl core::error::Error for FreeLieError {}

/// Integer combination of Lyndon words, the value type of the bracket memo.
pub type IntegerCombination = Vec<(Word, BigInt)>;

/// A free Lie algebra with a memoized bracket on Lyndon words.
#[derive(Debug)]
pub struct FreeLie {
    alphabet: Alphabet,
    memo: RefCell<BTreeMap<(Word, Word), IntegerCombination>>,
}

fn accumulate(acc: &mut BTreeMap<Word, BigInt>, terms: &[(Word, BigInt)], factor: &BigInt) {
    for (w, c) in terms {
        let e = acc.entry(w.clone()).or_insert_with(BigInt::zero);
        *e += c * factor;
        if e.is_zero() {
            acc.remove(w);
        }
    }
}

impl FreeLie {
    pub fn new(alphabet: Alphabet) -> Self {
        FreeLie { alphabet, memo: RefCell::new(BTreeMap::new()) }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    fn check(&self, x: &FreeLieElement) -> Result<(), FreeLieError> {
        match x.max_letter() {
            Some(l) if l as usize >= self.rank() => Err(FreeLieError::AlphabetMismatch { letter: l, rank: self.rank() }),
            _ => Ok(()),
        }
    }

    /// `[P(u), P(v)]` for Lyndon words `u`, `v`, in the Lyndon basis.
    pub fn bracket_words(&self, u: &[u8], v: &[u8]) -> IntegerCombination {
        match u.cmp(v) {
            core::cmp::Ordering::Equal => Vec::new(),
            core::cmp::Ordering::Greater => {
                self.bracket_words(v, u).into_iter().map(|(w, c)| (w, -c)).collect()
            }
            core::cmp::Ordering::Less => {
                let key = (u.to_vec(), v.to_vec());
                if let Some(hit) = self.memo.borrow().get(&key) {
                    return hit.clone();
                }
                let result = self.bracket_ordered(u, v);
                self.memo.borrow_mut().insert(key, result.clone());
                result
            }
        }
    }

    fn bracket_ordered(&self, u: &[u8], v: &[u8]) -> IntegerCombination {
        let split = standard_factorization(u);
        match split {
            Some((_, u2)) if u2 < v => {
                // [[u1,u2],v] = [u1,[u2,v]] - [u2,[u1,v]]
                let (u1, u2) = split.unwrap();
                let mut acc = BTreeMap::new();
                for (w, c) in self.bracket_words(u2, v) {
                    accumulate(&mut acc, &self.bracket_words(u1, &w), &c);
                }
                for (w, c) in self.bracket_words(u1, v) {
                    accumulate(&mut acc, &self.bracket_words(u2, &w), &-c);
                }
                acc.into_iter().collect()
            }
            _ => {
                let mut w = u.to_vec();
                w.extend_from_slice(v);
                vec![(w, BigInt::one())]
            }
        }
    }

    pub fn bracket(&self, x: &FreeLieElement, y: &FreeLieElement) -> Result<FreeLieElement, FreeLieError> {
        self.check(x)?;
        self.check(y)?;
        let mut out = FreeLieElement::zero();
        for (u, a) in x.terms() {
            for (v, b) in y.terms() {
                let ab = a * b;
                for (w, c) in self.bracket_words(u, v) {
                    out.add_term(w, &ab * BigRational::from_integer(c));
                }
            }
        }
        Ok(out)
    }

    /// `[x, [x, ... [x, y]]]` with `k` brackets.
    pub fn ad_power(&self, x: &FreeLieElement, k: usize, y: &FreeLieElement) -> Result<FreeLieElement, FreeLieError> {
        let mut acc = y.clone();
        for _ in 0..k {
            acc = self.bracket(x, &acc)?;
        }
        Ok(acc)
    }

    /// `[generator g, combination]` over the integers.
    pub fn ad_generator(&self, g: u8, terms: &[(Word, BigInt)]) -> BTreeMap<Word, BigInt> {
        let mut acc = BTreeMap::new();
        let gw = [g];
        for (w, c) in terms {
            accumulate(&mut acc, &self.bracket_words(&gw, w), c);
        }
        acc
    }
}

/// A Lie algebra into which free Lie elements can be evaluated.
pub trait LieModel {
    type Value: Clone;
    type Error;
    fn bracket(&self, x: &Self::Value, y: &Self::Value) -> Result<Self::Value, Self::Error>;
    fn combine(&self, terms: &[(BigRational, Self::Value)]) -> Result<Self::Value, Self::Error>;
}

/// Evaluates `x` under the homomorphism sending generator `i` to `images[i]`.
pub fn evaluate<M: LieModel>(model: &M, x: &FreeLieElement, images: &[M::Value]) -> Result<M::Value, M::Error> {
    let mut memo: BTreeMap<Word, M::Value> = BTreeMap::new();
    fn image<M: LieModel>(
        model: &M,
        w: &[u8],
        images: &[M::Value],
        memo: &mut BTreeMap<Word, M::Value>,
    ) -> Result<M::Value, M::Error> {
        if let Some(v) = memo.get(w) {
            return Ok(v.clone());
        }
        let v = match standard_factorization(w) {
            None => images[w[0] as usize].clone(),
            Some((u, v)) => {
                let a = image(model, u, images, memo)?;
                let b = image(model, v, images, memo)?;
                model.bracket(&a, &b)?
            }
        };
        memo.insert(w.to_vec(), v.clone());
        Ok(v)
    }
    let mut parts = Vec::with_capacity(x.len());
    for (w, c) in x.terms() {
        parts.push((c.clone(), image(model, w, images, &mut memo)?));
    }
    model.combine(&parts)
}

/// Where a relator comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelatorKind {
    Commutation,
    SerrePower,
    CrossSign,
    Torus,
    Weight,
}

impl fmt::Display for RelatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelatorKind::Commutation => "commutation",
            RelatorKind::SerrePower => "serre-power",
            RelatorKind::CrossSign => "cross-sign",
            RelatorKind::Torus => "torus",
            RelatorKind::Weight => "weight",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relator {
    pub element: FreeLieElement,
    pub kind: RelatorKind,
}

/// Normalized, duplicate-free relators over an alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorSet {
    alphabet: Alphabet,
    relators: Vec<Relator>,
}

impl RelatorSet {
    pub fn new(alphabet: Alphabet) -> Self {
        RelatorSet { alphabet, relators: Vec::new() }
    }

    /// Adds a nonzero relator unless an equal normalized one is present.
    pub fn push(&mut self, element: FreeLieElement, kind: RelatorKind) {
        if element.is_zero() {
            return;
        }
        let element = element.normalized();
        if self.relators.iter().all(|r| r.element != element) {
            self.relators.push(Relator { element, kind });
        }
    }

    pub fn extend(&mut self, other: &RelatorSet) {
        assert_eq!(self.alphabet, other.alphabet);
        for r in &other.relators {
            self.push(r.element.clone(), r.kind);
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }

    pub fn len(&self) -> usize {
        self.relators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn count(&self, kind: RelatorKind) -> usize {
        self.relators.iter().filter(|r| r.kind == kind).count()
    }

    /// Elements in sorted order, for comparisons that ignore provenance.
    pub fn sorted_elements(&self) -> Vec<FreeLieElement> {
        let mut v: Vec<_> = self.relators.iter().map(|r| r.element.clone()).collect();
        v.sort();
        v
    }
}

fn gen(i: usize) -> FreeLieElement {
    FreeLieElement::generator(i)
}

/// Serre relators of `n+(C)` (plain alphabet) or of the doubled alphabet.
pub fn serre_relators(c: &CartanMatrix, doubled: bool) -> RelatorSet {
    let n = c.size();
    if !doubled {
        let lie = FreeLie::new(Alphabet::plain(c));
        let mut set = RelatorSet::new(Alphabet::plain(c));
        for i in 0..n {
            for j in i + 1..n {
                if c.entry(i, j) == 0 {
                    set.push(lie.bracket(&gen(i), &gen(j)).unwrap(), RelatorKind::Commutation);
                }
            }
        }
        for i in (0..n).filter(|&i| c.entry(i, i) == 2) {
            for j in (0..n).filter(|&j| j != i) {
                let k = (1 - c.entry(i, j)) as usize;
                set.push(lie.ad_power(&gen(i), k, &gen(j)).unwrap(), RelatorKind::SerrePower);
            }
        }
        return set;
    }
    let alphabet = Alphabet::doubled(c);
    let lie = FreeLie::new(alphabet.clone());
    let mut set = RelatorSet::new(alphabet);
    let x = |sign, base| gen(SignedIndex { sign, base }.position(n));
    for sign in [Sign::Plus, Sign::Minus] {
        for i in 0..n {
            for j in i + 1..n {
                if c.entry(i, j) == 0 {
                    set.push(lie.bracket(&x(sign, i), &x(sign, j)).unwrap(), RelatorKind::Commutation);
                }
            }
        }
        for i in (0..n).filter(|&i| c.entry(i, i) == 2) {
            for j in (0..n).filter(|&j| j != i) {
                let k = (1 - c.entry(i, j)) as usize;
                set.push(lie.ad_power(&x(sign, i), k, &x(sign, j)).unwrap(), RelatorKind::SerrePower);
            }
        }
    }
    for sign in [Sign::Plus, Sign::Minus] {
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                set.push(lie.bracket(&x(sign, i), &x(sign.flip(), j)).unwrap(), RelatorKind::CrossSign);
            }
            if c.entry(i, i) == 2 {
                set.push(lie.ad_power(&x(sign, i), 3, &x(sign.flip(), i)).unwrap(), RelatorKind::CrossSign);
            }
        }
    }
    set
}

/// Torus and weight relators over the doubled alphabet.
pub fn kernel_relators(c: &CartanMatrix) -> RelatorSet {
    let n = c.size();
    let alphabet = Alphabet::doubled(c);
    let lie = FreeLie::new(alphabet.clone());
    let mut set = RelatorSet::new(alphabet);
    let x = |sign, base| gen(SignedIndex { sign, base }.position(n));
    let h = |i| lie.bracket(&x(Sign::Plus, i), &x(Sign::Minus, i)).unwrap();
    for i in 0..n {
        for j in i + 1..n {
            set.push(lie.bracket(&h(i), &h(j)).unwrap(), RelatorKind::Torus);
        }
    }
    for sign in [Sign::Plus, Sign::Minus] {
        for i in 0..n {
            let hi = lie.bracket(&x(sign.flip(), i), &x(sign, i)).unwrap();
            for j in 0..n {
                let a = BigRational::from_integer(BigInt::from(c.entry(i, j)));
                let r = lie.bracket(&hi, &x(sign, j)).unwrap().add(&x(sign, j).scale(&a));
                set.push(r, RelatorKind::Weight);
            }
        }
    }
    set
}
