//! Positive part of the loop algebra of sl2: `t C[t] (x) {f, h} + C[t] (x) {e}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::elimination::RowSpace;
use crate::report::{Report, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sl2 {
    E,
    F,
    H,
}

impl Sl2 {
    /// `[self, other]` in the basis `e, f, h`.
    pub fn bracket(self, other: Sl2) -> Option<(i64, Sl2)> {
        use Sl2::*;
        match (self, other) {
            (E, F) => Some((1, H)),
            (F, E) => Some((-1, H)),
            (H, E) => Some((2, E)),
            (E, H) => Some((-2, E)),
            (H, F) => Some((-2, F)),
            (F, H) => Some((2, F)),
            _ => None,
        }
    }

    /// Least power of `t` allowed in the positive part.
    pub fn min_power(self) -> u32 {
        match self {
            Sl2::E => 0,
            _ => 1,
        }
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sl2::E => "e",
            Sl2::F => "f",
            Sl2::H => "h",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopError {
    DegreeOverflow { power: u32, bound: u32 },
    OutsideDomain { power: u32, symbol: Sl2 },
    BoundTooSmall(u32),
}

impl fmt::Display for LoopError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopError::DegreeOverflow { power, bound } => write!(f, "power t^{power} exceeds the degree bound {bound}"),
            LoopError::OutsideDomain { power, symbol } => write!(f, "t^{power}(x){symbol} is not in the positive part"),
            LoopError::BoundTooSmall(b) => write!(f, "degree bound {b} is below 2"),
        }
    }
}

impl core::error::Error for LoopError {}

/// Combination of `t^m (x) x` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoopElement {
    terms: BTreeMap<(u32, Sl2), BigRational>,
}

impl LoopElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, power: u32, symbol: Sl2, c: BigRational) {
        let e = self.terms.entry((power, symbol)).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(power, symbol));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, Sl2), &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, power: u32, symbol: Sl2) -> BigRational {
        self.terms.get(&(power, symbol)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (&(m, x), v) in &self.terms {
            out.add_term(m, x, v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(m, x), v) in &other.terms {
            out.add_term(m, x, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Image under `t -> 1`.
    pub fn evaluate(&self) -> BTreeMap<Sl2, BigRational> {
        let mut out: BTreeMap<Sl2, BigRational> = BTreeMap::new();
        for (&(_, x), v) in &self.terms {
            *out.entry(x).or_insert_with(BigRational::zero) += v;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

impl fmt::Display for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&(m, x), c)) in self.terms.iter().enumerate() {
            let sep = if i == 0 { "" } else { " + " };
            write!(f, "{sep}{c}*t^{m}(x){x}")?;
        }
        Ok(())
    }
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Bracket `[t^m x, t^n y] = t^{m+n} [x, y]` truncated at a degree bound.
#[derive(Clone, Debug)]
pub struct LoopModel {
    bound: u32,
}

impl LoopModel {
    pub fn new(bound: u32) -> Result<Self, LoopError> {
        if bound < 2 {
            return Err(LoopError::BoundTooSmall(bound));
        }
        Ok(LoopModel { bound })
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn basis_element(&self, power: u32, symbol: Sl2) -> Result<LoopElement, LoopError> {
        if power < symbol.min_power() {
            return Err(LoopError::OutsideDomain { power, symbol });
        }
        if power > self.bound {
            return Err(LoopError::DegreeOverflow { power, bound: self.bound });
        }
        let mut x = LoopElement::zero();
        x.add_term(power, symbol, BigRational::one());
        Ok(x)
    }

    /// `e0 = t (x) f`.
    pub fn e0(&self) -> LoopElement {
        self.basis_element(1, Sl2::F).expect("bound is at least 2")
    }

    /// `e1 = 1 (x) e`.
    pub fn e1(&self) -> LoopElement {
        self.basis_element(0, Sl2::E).expect("bound is at least 2")
    }

    /// Basis elements with power at most the bound.
    pub fn basis(&self) -> Vec<(u32, Sl2)> {
        let mut out = Vec::new();
        for m in 0..=self.bound {
            for x in [Sl2::E, Sl2::F, Sl2::H] {
                if m >= x.min_power() {
                    out.push((m, x));
                }
            }
        }
        out
    }

    pub fn bracket(&self, a: &LoopElement, b: &LoopElement) -> Result<LoopElement, LoopError> {
        let mut out = LoopElement::zero();
        for (&(m, x), c) in a.terms() {
            for (&(n, y), d) in b.terms() {
                if let Some((k, z)) = x.bracket(y) {
                    let power = m + n;
                    if power > self.bound {
                        return Err(LoopError::DegreeOverflow { power, bound: self.bound });
                    }
                    out.add_term(power, z, c * d * rational(k));
                }
            }
        }
        Ok(out)
    }

    /// Whether iterated brackets of `e0` and `e1` span every basis element
    /// within the bound.
    pub fn generated_by_e0_e1(&self) -> bool {
        let mut span: RowSpace<(u32, Sl2)> = RowSpace::new();
        let gens = [self.e0(), self.e1()];
        let mut frontier = Vec::new();
        for g in &gens {
            if span.insert(integral_row(g)).is_some() {
                frontier.push(g.clone());
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for g in &gens {
                    let Ok(y) = self.bracket(g, x) else { continue };
                    if !y.is_zero() && span.insert(integral_row(&y)).is_some() {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        span.rank() == self.basis().len()
    }

    /// Relations (a) to (d), the kernel identities, generation and the
    /// evaluation map.
    pub fn check(&self) -> Result<Report, LoopError> {
        let mut report = Report::new();
        let b = |m, x| self.basis_element(m, x);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mut row = |id: &str, params: String, lhs: LoopElement, rhs: LoopElement| {
            let d = lhs.sub(&rhs);
            let witness = (!d.is_zero()).then(|| format!("{d}"));
            report.push(id, "Q", params, Verdict::from_bool(d.is_zero()), witness);
        };
        let (e0, e1) = (self.e0(), self.e1());
        row("a", "t(x)h=[1(x)e,t(x)f]".into(), b(1, Sl2::H)?, self.bracket(&b(0, Sl2::E)?, &b(1, Sl2::F)?)?);
        for n in 1..self.bound {
            row("b", format!("n={n}"), b(n + 1, Sl2::E)?, self.bracket(&b(1, Sl2::H)?, &b(n, Sl2::E)?)?.scale(&half));
            row("c", format!("n={n}"), b(n + 1, Sl2::F)?, self.bracket(&b(n, Sl2::F)?, &b(1, Sl2::H)?)?.scale(&half));
        }
        for n in 1..=self.bound {
            row("d", format!("n={n}"), b(n, Sl2::H)?, self.bracket(&b(0, Sl2::E)?, &b(n, Sl2::F)?)?);
        }
        let h10 = self.bracket(&e1, &e0)?;
        let two = rational(2);
        // [[e1,e0],e1] - 2e1 = 2(t-1)(x)e
        let rhs = b(1, Sl2::E)?.sub(&b(0, Sl2::E)?).scale(&two);
        row("kernel", "[[e1,e0],e1]-2e1".into(), self.bracket(&h10, &e1)?.sub(&e1.scale(&two)), rhs);
        // [[e1,e0],e0] + 2e0 = -2(t-1)(x)(t f)
        let rhs = b(2, Sl2::F)?.sub(&b(1, Sl2::F)?).scale(&-two.clone());
        row("kernel", "[[e1,e0],e0]+2e0".into(), self.bracket(&h10, &e0)?.add(&e0.scale(&two)), rhs);

        report.push("generators", "Q", format!("bound={}", self.bound), Verdict::from_bool(self.generated_by_e0_e1()), None);

        // t -> 1 is a Lie map sending e1 to e and e0 to f, so it is the map
        // determined by those images
        let basis = self.basis();
        let mut hom = self.e1().evaluate() == BTreeMap::from([(Sl2::E, BigRational::one())])
            && self.e0().evaluate() == BTreeMap::from([(Sl2::F, BigRational::one())]);
        for &(m, x) in &basis {
            for &(n, y) in &basis {
                let Ok(z) = self.bracket(&b(m, x)?, &b(n, y)?) else { continue };
                let expected: BTreeMap<Sl2, BigRational> =
                    x.bracket(y).map(|(k, s)| BTreeMap::from([(s, rational(k))])).unwrap_or_default();
                hom &= z.evaluate() == expected;
            }
        }
        report.push("evaluation", "Q", "t->1 is a Lie map", Verdict::from_bool(hom), None);
        for n in 1..=self.bound {
            let f_ok = b(n, Sl2::F)?.evaluate() == e0.evaluate();
            report.push("evaluation", "Q", format!("t^{n}(x)f=f mod (t-1)"), Verdict::from_bool(f_ok), None);
            let e_ok = b(n - 1, Sl2::E)?.evaluate() == e1.evaluate();
            report.push("evaluation", "Q", format!("t^{}(x)e=e mod (t-1)", n - 1), Verdict::from_bool(e_ok), None);
        }
        Ok(report)
    }
}

/// Clears denominators.
fn integral_row(x: &LoopElement) -> BTreeMap<(u32, Sl2), BigInt> {
    let l = x.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    x.terms().map(|(&k, c)| (k, (c * BigRational::from_integer(l.clone())).to_integer())).filter(|(_, c)| !c.is_zero()).collect()
}

pub(crate) fn as_integer(c: &BigRational) -> Option<BigInt> {
    c.is_integer().then(|| c.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let l = LoopModel::new(8).unwrap();
        let b = |m, x| l.basis_element(m, x).unwrap();
        assert_eq!(l.bracket(&b(0, Sl2::E), &b(1, Sl2::F)).unwrap(), b(1, Sl2::H));
        let k = l.bracket(&l.bracket(&l.e1(), &l.e0()).unwrap(), &l.e1()).unwrap().sub(&l.e1().scale(&rational(2)));
        assert_eq!(k, b(1, Sl2::E).scale(&rational(2)).sub(&b(0, Sl2::E).scale(&rational(2))));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(l.bracket(&b(1, Sl2::H), &b(1, Sl2::E)).unwrap().scale(&half), b(2, Sl2::E));
        assert!(matches!(l.bracket(&b(5, Sl2::H), &b(4, Sl2::E)), Err(LoopError::DegreeOverflow { power: 9, .. })));
        assert!(matches!(l.basis_element(0, Sl2::F), Err(LoopError::OutsideDomain { .. })));
        assert!(LoopModel::new(1).is_err());
    }

    #[test]
    fn full_check_passes() {
        for bound in [2, 3, 8] {
            let r = LoopModel::new(bound).unwrap().check().unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
