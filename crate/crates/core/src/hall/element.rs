use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{ClassKey, HallError};

/// Coefficient ring of Hall elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    /// `Z/(m)`; `m = 1` is the zero ring.
    Residue(u64),
}

impl Coefficients {
    pub fn normalize(self, c: i128) -> i128 {
        match self {
            Coefficients::Integers => c,
            Coefficients::Residue(m) => c.rem_euclid(m as i128),
        }
    }

    pub fn is_collapsed(self) -> bool {
        self == Coefficients::Residue(1)
    }
}

fn insert<K: Ord + Clone>(terms: &mut BTreeMap<K, i128>, ring: Coefficients, k: K, c: i128) -> Result<(), HallError> {
    let e = terms.entry(k.clone()).or_insert(0);
    *e = ring.normalize(e.checked_add(c).ok_or(HallError::Overflow)?);
    if *e == 0 {
        terms.remove(&k);
    }
    Ok(())
}

/// Finite combination of isomorphism classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HallElement {
    ring: Coefficients,
    terms: BTreeMap<ClassKey, i128>,
}

impl HallElement {
    pub fn zero(ring: Coefficients) -> Self {
        HallElement { ring, terms: BTreeMap::new() }
    }

    pub fn basis(key: ClassKey, ring: Coefficients) -> Self {
        let mut x = Self::zero(ring);
        x.add_term(key, 1).expect("no overflow");
        x
    }

    pub fn from_terms<I: IntoIterator<Item = (ClassKey, i128)>>(ring: Coefficients, it: I) -> Result<Self, HallError> {
        let mut x = Self::zero(ring);
        for (k, c) in it {
            x.add_term(k, c)?;
        }
        Ok(x)
    }

    pub fn ring(&self) -> Coefficients {
        self.ring
    }

    pub fn add_term(&mut self, key: ClassKey, c: i128) -> Result<(), HallError> {
        insert(&mut self.terms, self.ring, key, c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ClassKey, i128)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &ClassKey) -> i128 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<(), HallError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(HallError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, HallError> {
        self.check(other)?;
        let mut x = self.clone();
        for (k, c) in other.terms() {
            x.add_term(k.clone(), c)?;
        }
        Ok(x)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HallError> {
        self.add(&other.scale(-1)?)
    }

    pub fn scale(&self, s: i128) -> Result<Self, HallError> {
        let mut x = Self::zero(self.ring);
        for (k, c) in self.terms() {
            x.add_term(k.clone(), c.checked_mul(s).ok_or(HallError::Overflow)?)?;
        }
        Ok(x)
    }

    /// Coefficients mapped into `Z/(m)`.
    pub fn reduce(&self, m: u64) -> Self {
        let ring = Coefficients::Residue(m);
        let mut x = Self::zero(ring);
        for (k, c) in self.terms() {
            x.add_term(k.clone(), c).expect("reduction cannot overflow");
        }
        x
    }

    /// Keeps the terms whose key satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&ClassKey) -> bool) -> Self {
        HallElement { ring: self.ring, terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, &c)| (k.clone(), c)).collect() }
    }

    pub fn keys(&self) -> Vec<ClassKey> {
        self.terms.keys().cloned().collect()
    }
}

/// Finite combination of pairs of classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorElement {
    ring: Coefficients,
    terms: BTreeMap<(ClassKey, ClassKey), i128>,
}

impl TensorElement {
    pub fn zero(ring: Coefficients) -> Self {
        TensorElement { ring, terms: BTreeMap::new() }
    }

    pub fn ring(&self) -> Coefficients {
        self.ring
    }

    pub fn add_term(&mut self, left: ClassKey, right: ClassKey, c: i128) -> Result<(), HallError> {
        insert(&mut self.terms, self.ring, (left, right), c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(ClassKey, ClassKey), i128)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, left: &ClassKey, right: &ClassKey) -> i128 {
        self.terms.get(&(left.clone(), right.clone())).copied().unwrap_or(0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HallError> {
        if self.ring != other.ring {
            return Err(HallError::RingMismatch);
        }
        let mut x = self.clone();
        for ((l, r), c) in other.terms() {
            x.add_term(l.clone(), r.clone(), -c)?;
        }
        Ok(x)
    }

    pub fn reduce(&self, m: u64) -> Self {
        let mut x = Self::zero(Coefficients::Residue(m));
        for ((l, r), c) in self.terms() {
            x.add_term(l.clone(), r.clone(), c).expect("reduction cannot overflow");
        }
        x
    }

    /// `x (x) y`.
    pub fn outer(x: &HallElement, y: &HallElement) -> Result<Self, HallError> {
        x.check(y)?;
        let mut t = Self::zero(x.ring);
        for (a, c) in x.terms() {
            for (b, d) in y.terms() {
                t.add_term(a.clone(), b.clone(), c.checked_mul(d).ok_or(HallError::Overflow)?)?;
            }
        }
        Ok(t)
    }

    pub fn add(&self, other: &Self) -> Result<Self, HallError> {
        if self.ring != other.ring {
            return Err(HallError::RingMismatch);
        }
        let mut x = self.clone();
        for ((l, r), c) in other.terms() {
            x.add_term(l.clone(), r.clone(), c)?;
        }
        Ok(x)
    }
}
