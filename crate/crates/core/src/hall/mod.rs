//! Ringel–Hall algebras of quivers over small finite fields.
//!
//! Isomorphism classes are named by the lexicographically least code in their
//! orbit under base change. Products use extension counting, coproducts the
//! Krull–Schmidt decomposition.

mod element;
mod rep;

pub use element::{Coefficients, HallElement, TensorElement};
pub use rep::{combination, entry_count, hom_basis, path_ranks, Representation};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use hashbrown::{HashMap, HashSet};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::cartan::Quiver;
use crate::field::{gl_order, subspaces, FiniteField, Fq, Mat};
use crate::freelie::{evaluate, serre_relators, LieModel};
use crate::report::{Report, Verdict};
use rep::increment;

/// Largest total dimension accepted by enumeration and products.
pub const MAX_TOTAL_DIM: usize = 6;
/// Largest number of matrix entries accepted by enumeration.
pub const MAX_ENTRIES: usize = 18;
/// Code spaces up to this size are catalogued exhaustively.
pub const DENSE_LIMIT: u64 = 1 << 22;
/// Largest orbit explored by breadth-first search.
const ORBIT_SEARCH_LIMIT: u128 = 1 << 20;
/// Largest number of codes visited when scanning for an orbit minimum.
const SCAN_LIMIT: u64 = 1 << 28;
/// Largest enumeration of endomorphisms, homomorphisms, cocycles or subspaces.
const COUNT_LIMIT: u128 = 1 << 22;
const INVARIANT_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HallError {
    SizeGuard(&'static str),
    DimensionMismatch,
    ShapeMismatch,
    NotNilpotent,
    RingMismatch,
    Overflow,
    /// The coefficient ring `Z/(q-1)` is the zero ring.
    Collapsed,
    NonIntegral,
    InvalidKey(String),
    Parse { line: usize, message: String },
    Internal(&'static str),
}

impl fmt::Display for HallError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HallError::SizeGuard(what) => write!(f, "size guard exceeded: {what}"),
            HallError::DimensionMismatch => f.write_str("dimension vectors do not add up"),
            HallError::ShapeMismatch => f.write_str("representation does not fit the quiver"),
            HallError::NotNilpotent => f.write_str("representation is not nilpotent"),
            HallError::RingMismatch => f.write_str("coefficient rings differ"),
            HallError::Overflow => f.write_str("coefficient overflow"),
            HallError::Collapsed => f.write_str("modulus q-1 = 1: the coefficient ring is zero"),
            HallError::NonIntegral => f.write_str("non-integral coefficient"),
            HallError::InvalidKey(s) => write!(f, "invalid class key {s:?}"),
            HallError::Parse { line, message } => write!(f, "line {line}: {message}"),
            HallError::Internal(what) => write!(f, "internal consistency failure: {what}"),
        }
    }
}

impl core::error::Error for HallError {}

/// Isomorphism class: dimension vector and least code in the orbit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassKey {
    dims: Vec<usize>,
    code: u64,
}

impl ClassKey {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
}

/// Cached facts about a class.
#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub automorphisms: u128,
    /// Indecomposable summands, sorted; empty for the zero class.
    pub summands: Vec<ClassKey>,
    /// Size of `End/rad End` for an indecomposable class.
    pub residue: Option<u128>,
}

struct Analysis {
    automorphisms: u128,
    residue: Option<u128>,
    summands: Option<Vec<ClassKey>>,
}

#[derive(Clone, Copy)]
struct Block {
    offset: usize,
    rows: usize,
    cols: usize,
    source: usize,
    target: usize,
}

/// Elementary base change at one vertex.
#[derive(Clone, Copy)]
enum Move {
    /// `g = I + c E_ij`.
    Shear { vertex: usize, i: usize, j: usize, c: Fq },
    /// `g = diag(.., c, ..)` at position `i`.
    Scale { vertex: usize, i: usize, c: Fq, inv: Fq },
}

const UNSET: u32 = u32::MAX;
const WILD: u32 = u32::MAX - 1;

struct Dense {
    class_of: Vec<u32>,
    /// Least code and orbit size per class, in order of least code.
    classes: Vec<(u64, u64)>,
}

#[derive(Default)]
struct Registry {
    lookup: HashMap<u64, u64>,
    known: Vec<(Vec<usize>, u64)>,
}

/// Structure constants of `[m][n]`.
type Product = Rc<Vec<(ClassKey, i128)>>;

#[derive(Default)]
struct State {
    dense: BTreeMap<Vec<usize>, Rc<Dense>>,
    registry: BTreeMap<Vec<usize>, Registry>,
    info: BTreeMap<ClassKey, Rc<ClassInfo>>,
    products: BTreeMap<(ClassKey, ClassKey), Product>,
    sums: BTreeMap<Vec<ClassKey>, ClassKey>,
}

/// Hall algebra of a quiver over `F_q`, with caches for classes and products.
pub struct HallAlgebra {
    quiver: Quiver,
    field: FiniteField,
    q: u64,
    dense_limit: u64,
    acyclic: bool,
    state: RefCell<State>,
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    base.checked_pow(u32::try_from(exp).ok()?)
}

impl HallAlgebra {
    pub fn new(quiver: Quiver, field: FiniteField) -> Self {
        Self::with_dense_limit(quiver, field, DENSE_LIMIT)
    }

    /// As `new`, cataloguing code spaces exhaustively only up to `limit`.
    pub fn with_dense_limit(quiver: Quiver, field: FiniteField, limit: u64) -> Self {
        let q = field.order() as u64;
        let acyclic = !quiver.has_oriented_cycle();
        HallAlgebra { quiver, field, q, dense_limit: limit.min(DENSE_LIMIT), acyclic, state: RefCell::new(State::default()) }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `q - 1`, the modulus of the degenerate coefficient ring.
    pub fn modulus(&self) -> u64 {
        self.q - 1
    }

    pub fn residue_ring(&self) -> Coefficients {
        Coefficients::Residue(self.modulus())
    }

    pub fn zero_key(&self) -> ClassKey {
        ClassKey { dims: vec![0; self.quiver.vertices().len()], code: 0 }
    }

    pub fn simple_key(&self, v: usize) -> ClassKey {
        let mut dims = vec![0; self.quiver.vertices().len()];
        dims[v] = 1;
        let code = 0;
        // loops at v carry a 1x1 zero block, which is already the least code
        ClassKey { dims, code }
    }

    pub fn representative(&self, key: &ClassKey) -> Representation {
        Representation::decode(&self.quiver, &key.dims, self.q, key.code)
    }

    fn is_nilpotent(&self, rep: &Representation) -> bool {
        self.acyclic || rep.is_nilpotent(&self.quiver, &self.field)
    }

    fn guard_dims(&self, dims: &[usize]) -> Result<(), HallError> {
        if dims.len() != self.quiver.vertices().len() {
            return Err(HallError::ShapeMismatch);
        }
        if dims.iter().sum::<usize>() > MAX_TOTAL_DIM {
            return Err(HallError::SizeGuard("total dimension above 6"));
        }
        if entry_count(&self.quiver, dims) > MAX_ENTRIES {
            return Err(HallError::SizeGuard("more than 18 matrix entries"));
        }
        Ok(())
    }

    fn code_space(&self, dims: &[usize]) -> Option<u64> {
        let e = entry_count(&self.quiver, dims);
        let total = checked_pow(self.q as u128, e)?;
        u64::try_from(total).ok()
    }

    fn layout(&self, dims: &[usize]) -> Vec<Block> {
        let mut offset = 0;
        self.quiver
            .arrows()
            .iter()
            .map(|a| {
                let b = Block { offset, rows: dims[a.target], cols: dims[a.source], source: a.source, target: a.target };
                offset += b.rows * b.cols;
                b
            })
            .collect()
    }

    /// Generators of the base-change group for `dims`.
    fn moves(&self, dims: &[usize]) -> Vec<Move> {
        let f = &self.field;
        let mut out = Vec::new();
        for (vertex, &n) in dims.iter().enumerate() {
            if n >= 2 {
                for i in 0..n - 1 {
                    out.push(Move::Shear { vertex, i, j: i + 1, c: 1 });
                    out.push(Move::Shear { vertex, i: i + 1, j: i, c: 1 });
                }
                if let Some(theta) = f.theta() {
                    let mut c = theta;
                    for _ in 1..f.exponent() {
                        out.push(Move::Shear { vertex, i: 0, j: 1, c });
                        c = f.mul(c, theta);
                    }
                }
            }
            if n >= 1 && self.q > 2 {
                let c = f.primitive();
                out.push(Move::Scale { vertex, i: 0, c, inv: f.inv(c) });
            }
        }
        out
    }

    fn apply(&self, blocks: &[Block], e: &mut [Fq], mv: Move) {
        let f = &self.field;
        match mv {
            Move::Shear { vertex, i, j, c } => {
                for b in blocks {
                    if b.target == vertex {
                        for k in 0..b.cols {
                            let x = e[b.offset + j * b.cols + k];
                            if x != 0 {
                                let y = &mut e[b.offset + i * b.cols + k];
                                *y = f.add(*y, f.mul(c, x));
                            }
                        }
                    }
                    if b.source == vertex {
                        for k in 0..b.rows {
                            let x = e[b.offset + k * b.cols + i];
                            if x != 0 {
                                let y = &mut e[b.offset + k * b.cols + j];
                                *y = f.sub(*y, f.mul(c, x));
                            }
                        }
                    }
                }
            }
            Move::Scale { vertex, i, c, inv } => {
                for b in blocks {
                    if b.target == vertex {
                        for k in 0..b.cols {
                            let y = &mut e[b.offset + i * b.cols + k];
                            *y = f.mul(*y, c);
                        }
                    }
                    if b.source == vertex {
                        for k in 0..b.rows {
                            let y = &mut e[b.offset + k * b.cols + i];
                            *y = f.mul(*y, inv);
                        }
                    }
                }
            }
        }
    }

    fn digits_of(&self, mut code: u64, out: &mut [Fq]) {
        for d in out.iter_mut().rev() {
            *d = (code % self.q) as Fq;
            code /= self.q;
        }
    }

    fn code_of(&self, digits: &[Fq]) -> u64 {
        digits.iter().fold(0u64, |acc, &d| acc * self.q + d as u64)
    }

    fn dense(&self, dims: &[usize]) -> Rc<Dense> {
        if let Some(d) = self.state.borrow().dense.get(dims) {
            return d.clone();
        }
        let total = self.code_space(dims).expect("dense space fits");
        let e = entry_count(&self.quiver, dims);
        let blocks = self.layout(dims);
        let moves = self.moves(dims);
        let mut class_of = vec![UNSET; total as usize];
        let mut classes = Vec::new();
        let mut queue: Vec<u64> = Vec::new();
        let (mut cur, mut next) = (vec![0 as Fq; e], vec![0 as Fq; e]);
        for start in 0..total {
            if class_of[start as usize] != UNSET {
                continue;
            }
            let nilpotent = self.is_nilpotent(&Representation::decode(&self.quiver, dims, self.q, start));
            let label = if nilpotent { classes.len() as u32 } else { WILD };
            class_of[start as usize] = label;
            queue.clear();
            queue.push(start);
            let mut head = 0;
            while head < queue.len() {
                self.digits_of(queue[head], &mut cur);
                head += 1;
                for &mv in &moves {
                    next.copy_from_slice(&cur);
                    self.apply(&blocks, &mut next, mv);
                    let c = self.code_of(&next) as usize;
                    if class_of[c] == UNSET {
                        class_of[c] = label;
                        queue.push(c as u64);
                    }
                }
            }
            if nilpotent {
                classes.push((start, queue.len() as u64));
            }
        }
        let d = Rc::new(Dense { class_of, classes });
        self.state.borrow_mut().dense.insert(dims.to_vec(), d.clone());
        d
    }

    /// Breadth-first orbit of `start`; fails once more than `limit` codes are seen.
    fn orbit(&self, dims: &[usize], start: u64, limit: u128) -> Result<Vec<u64>, HallError> {
        let e = entry_count(&self.quiver, dims);
        let blocks = self.layout(dims);
        let moves = self.moves(dims);
        let mut seen: HashSet<u64> = HashSet::new();
        seen.insert(start);
        let mut queue = vec![start];
        let (mut cur, mut next) = (vec![0 as Fq; e], vec![0 as Fq; e]);
        let mut head = 0;
        while head < queue.len() {
            self.digits_of(queue[head], &mut cur);
            head += 1;
            for &mv in &moves {
                next.copy_from_slice(&cur);
                self.apply(&blocks, &mut next, mv);
                let c = self.code_of(&next);
                if seen.insert(c) {
                    if seen.len() as u128 > limit {
                        return Err(HallError::Internal("orbit larger than predicted"));
                    }
                    queue.push(c);
                }
            }
        }
        Ok(queue)
    }

    /// Order of the base-change group `prod_v GL(d_v)`.
    pub fn group_order(&self, dims: &[usize]) -> Result<u128, HallError> {
        dims.iter().try_fold(1u128, |acc, &d| {
            gl_order(self.q as u128, d as u32).and_then(|g| acc.checked_mul(g)).ok_or(HallError::Overflow)
        })
    }

    /// Canonical key of a nilpotent representation.
    pub fn key_of(&self, rep: &Representation) -> Result<ClassKey, HallError> {
        if !rep.has_shape(&self.quiver) {
            return Err(HallError::ShapeMismatch);
        }
        if !self.is_nilpotent(rep) {
            return Err(HallError::NotNilpotent);
        }
        self.canonical(rep)
    }

    fn canonical(&self, rep: &Representation) -> Result<ClassKey, HallError> {
        let dims = rep.dims.clone();
        if entry_count(&self.quiver, &dims) == 0 {
            return Ok(ClassKey { dims, code: 0 });
        }
        let code = rep.encode(self.q);
        if let Some(space) = self.code_space(&dims) {
            if space <= self.dense_limit {
                let dense = self.dense(&dims);
                let label = dense.class_of[code as usize];
                let min = dense.classes.get(label as usize).ok_or(HallError::NotNilpotent)?.0;
                return Ok(ClassKey { dims, code: min });
            }
        }
        if let Some(&min) = self.state.borrow().registry.get(&dims).and_then(|r| r.lookup.get(&code)) {
            return Ok(ClassKey { dims, code: min });
        }
        let inv = path_ranks(&self.quiver, &self.field, rep, INVARIANT_LIMIT);
        let candidates: Vec<u64> = self
            .state
            .borrow()
            .registry
            .get(&dims)
            .map(|r| r.known.iter().filter(|(i, _)| *i == inv).map(|&(_, m)| m).collect())
            .unwrap_or_default();
        for min in candidates {
            let other = Representation::decode(&self.quiver, &dims, self.q, min);
            if self.isomorphic_unchecked(rep, &other)? {
                self.remember(&dims, code, min);
                return Ok(ClassKey { dims, code: min });
            }
        }
        // a class not seen before
        let analysis = self.analyze(rep)?;
        let group = self.group_order(&dims)?;
        if group % analysis.automorphisms != 0 {
            return Err(HallError::Internal("automorphism count does not divide the group order"));
        }
        let orbit = group / analysis.automorphisms;
        let min = if orbit <= ORBIT_SEARCH_LIMIT {
            let codes = self.orbit(&dims, code, orbit)?;
            if codes.len() as u128 != orbit {
                return Err(HallError::Internal("orbit smaller than predicted"));
            }
            let min = *codes.iter().min().expect("orbit is nonempty");
            let mut st = self.state.borrow_mut();
            let reg = st.registry.entry(dims.clone()).or_default();
            for c in codes {
                reg.lookup.insert(c, min);
            }
            min
        } else {
            let min = self.scan(&dims, rep, &inv)?;
            self.remember(&dims, code, min);
            min
        };
        let key = ClassKey { dims: dims.clone(), code: min };
        {
            let mut st = self.state.borrow_mut();
            st.registry.entry(dims).or_default().known.push((inv, min));
            let summands = analysis.summands.unwrap_or_else(|| vec![key.clone()]);
            st.info.entry(key.clone()).or_insert_with(|| {
                Rc::new(ClassInfo { automorphisms: analysis.automorphisms, summands, residue: analysis.residue })
            });
        }
        Ok(key)
    }

    fn remember(&self, dims: &[usize], code: u64, min: u64) {
        self.state.borrow_mut().registry.entry(dims.to_vec()).or_default().lookup.insert(code, min);
    }

    /// First code, in increasing order, of a representation isomorphic to `rep`.
    fn scan(&self, dims: &[usize], rep: &Representation, inv: &[usize]) -> Result<u64, HallError> {
        let end = self.code_space(dims).unwrap_or(u64::MAX).min(SCAN_LIMIT);
        for c in 0..end {
            let r = Representation::decode(&self.quiver, dims, self.q, c);
            if !self.is_nilpotent(&r) || path_ranks(&self.quiver, &self.field, &r, INVARIANT_LIMIT) != inv {
                continue;
            }
            if self.isomorphic_unchecked(&r, rep)? {
                return Ok(c);
            }
        }
        Err(HallError::SizeGuard("orbit minimum not found within the scan limit"))
    }

    /// Searches `Hom(a, b)` for an isomorphism. When that space is too large,
    /// compares indecomposable summands instead (Krull-Schmidt).
    fn isomorphic_unchecked(&self, a: &Representation, b: &Representation) -> Result<bool, HallError> {
        let basis = hom_basis(&self.quiver, &self.field, a, b);
        if a.total_dim() == 0 {
            return Ok(true);
        }
        if basis.is_empty() {
            return Ok(false);
        }
        let space = checked_pow(self.q as u128, basis.len()).unwrap_or(u128::MAX);
        if space > COUNT_LIMIT {
            return match (self.analyze(a)?.summands, self.analyze(b)?.summands) {
                (Some(x), Some(y)) => Ok(x == y),
                (None, None) => Err(HallError::SizeGuard("homomorphism space too large")),
                _ => Ok(false),
            };
        }
        let mut coeffs = vec![0 as Fq; basis.len()];
        while increment(&mut coeffs, self.q as Fq) {
            let phi = combination(&self.field, &basis, &coeffs);
            if phi.iter().all(|m| m.is_invertible(&self.field)) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Isomorphism test with invariant screening.
    pub fn is_isomorphic(&self, a: &Representation, b: &Representation) -> Result<bool, HallError> {
        if !a.has_shape(&self.quiver) || !b.has_shape(&self.quiver) {
            return Err(HallError::ShapeMismatch);
        }
        if a.dims != b.dims {
            return Ok(false);
        }
        if path_ranks(&self.quiver, &self.field, a, INVARIANT_LIMIT) != path_ranks(&self.quiver, &self.field, b, INVARIANT_LIMIT) {
            return Ok(false);
        }
        self.isomorphic_unchecked(a, b)
    }

    /// Fitting analysis of `End(rep)`: splits along `ker phi^N + im phi^N` for
    /// an endomorphism that is neither nilpotent nor invertible, otherwise counts
    /// the radical.
    fn analyze(&self, rep: &Representation) -> Result<Analysis, HallError> {
        if rep.total_dim() == 0 {
            return Ok(Analysis { automorphisms: 1, residue: None, summands: Some(Vec::new()) });
        }
        let f = &self.field;
        let basis = hom_basis(&self.quiver, f, rep, rep);
        let power = *rep.dims.iter().max().expect("nonempty quiver");
        enum Kind {
            Nilpotent,
            Unit,
            Split(Vec<Mat>),
        }
        let classify = |phi: &[Mat]| {
            let psi: Vec<Mat> = phi.iter().map(|m| m.pow(f, power)).collect();
            if psi.iter().all(Mat::is_zero) {
                Kind::Nilpotent
            } else if psi.iter().all(|m| m.is_invertible(f)) {
                Kind::Unit
            } else {
                Kind::Split(psi)
            }
        };
        let mut split = basis.iter().find_map(|b| match classify(b) {
            Kind::Split(psi) => Some(psi),
            _ => None,
        });
        let mut nilpotent = 0u128;
        if split.is_none() {
            let space = checked_pow(self.q as u128, basis.len()).ok_or(HallError::Overflow)?;
            if space > COUNT_LIMIT {
                return Err(HallError::SizeGuard("endomorphism ring too large"));
            }
            let mut coeffs = vec![0 as Fq; basis.len()];
            loop {
                match classify(&combination(f, &basis, &coeffs)) {
                    Kind::Nilpotent => nilpotent += 1,
                    Kind::Unit => {}
                    Kind::Split(psi) => {
                        split = Some(psi);
                        break;
                    }
                }
                if !increment(&mut coeffs, self.q as Fq) {
                    break;
                }
            }
        }
        match split {
            Some(psi) => {
                let kernels: Vec<Mat> = psi.iter().map(|m| m.kernel(f)).collect();
                let images: Vec<Mat> = psi.iter().map(|m| m.column_space(f)).collect();
                let mut summands = self.decompose_unchecked(&rep.restrict(&self.quiver, f, &kernels))?;
                summands.extend(self.decompose_unchecked(&rep.restrict(&self.quiver, f, &images))?);
                summands.sort();
                let automorphisms = self.automorphisms_from(basis.len(), &summands)?;
                Ok(Analysis { automorphisms, residue: None, summands: Some(summands) })
            }
            None => {
                let end = checked_pow(self.q as u128, basis.len()).ok_or(HallError::Overflow)?;
                if nilpotent == 0 || end % nilpotent != 0 {
                    return Err(HallError::Internal("radical count"));
                }
                Ok(Analysis { automorphisms: end - nilpotent, residue: Some(end / nilpotent), summands: None })
            }
        }
    }

    /// `|End| prod_i prod_{j <= k_i} (1 - r_i^-j)` for summand multiplicities `k_i`
    /// with residue field sizes `r_i`.
    fn automorphisms_from(&self, end_dim: usize, summands: &[ClassKey]) -> Result<u128, HallError> {
        let mut numerator = 1u128;
        let mut denominator = 1u128;
        let mut i = 0;
        while i < summands.len() {
            let k = summands[i..].iter().take_while(|s| **s == summands[i]).count();
            let r = self.info(&summands[i])?.residue.ok_or(HallError::Internal("summand is not indecomposable"))?;
            for j in 1..=k {
                let rj = checked_pow(r, j).ok_or(HallError::Overflow)?;
                numerator = numerator.checked_mul(rj - 1).ok_or(HallError::Overflow)?;
                denominator = denominator.checked_mul(rj).ok_or(HallError::Overflow)?;
            }
            i += k;
        }
        let end = checked_pow(self.q as u128, end_dim).ok_or(HallError::Overflow)?;
        if end % denominator != 0 {
            return Err(HallError::Internal("automorphism formula"));
        }
        (end / denominator).checked_mul(numerator).ok_or(HallError::Overflow)
    }

    /// Facts about a class, computed on first use.
    pub fn info(&self, key: &ClassKey) -> Result<Rc<ClassInfo>, HallError> {
        if let Some(i) = self.state.borrow().info.get(key) {
            return Ok(i.clone());
        }
        let a = self.analyze(&self.representative(key))?;
        let info = Rc::new(ClassInfo {
            automorphisms: a.automorphisms,
            summands: a.summands.unwrap_or_else(|| vec![key.clone()]),
            residue: a.residue,
        });
        self.state.borrow_mut().info.insert(key.clone(), info.clone());
        Ok(info)
    }

    pub fn automorphisms(&self, key: &ClassKey) -> Result<u128, HallError> {
        Ok(self.info(key)?.automorphisms)
    }

    /// Orbit size `|G_d| / |Aut|`.
    pub fn orbit_size(&self, key: &ClassKey) -> Result<u128, HallError> {
        Ok(self.group_order(&key.dims)? / self.automorphisms(key)?)
    }

    pub fn is_indecomposable(&self, key: &ClassKey) -> Result<bool, HallError> {
        Ok(self.info(key)?.summands.len() == 1)
    }

    fn decompose_unchecked(&self, rep: &Representation) -> Result<Vec<ClassKey>, HallError> {
        let key = self.canonical(rep)?;
        Ok(self.info(&key)?.summands.clone())
    }

    /// Indecomposable summands with multiplicity, sorted by key.
    pub fn decompose(&self, rep: &Representation) -> Result<Vec<ClassKey>, HallError> {
        self.guard_dims(&rep.dims)?;
        let key = self.key_of(rep)?;
        Ok(self.info(&key)?.summands.clone())
    }

    /// Class of a direct sum; the empty sum is the zero class.
    pub fn sum_key(&self, parts: &[ClassKey]) -> Result<ClassKey, HallError> {
        match parts {
            [] => return Ok(self.zero_key()),
            [k] => return Ok(k.clone()),
            _ => {}
        }
        let mut sorted = parts.to_vec();
        sorted.sort();
        if let Some(k) = self.state.borrow().sums.get(&sorted) {
            return Ok(k.clone());
        }
        let mut rep = self.representative(&sorted[0]);
        for k in &sorted[1..] {
            rep = rep.direct_sum(&self.representative(k));
        }
        let key = self.canonical(&rep)?;
        self.state.borrow_mut().sums.insert(sorted, key.clone());
        Ok(key)
    }

    /// All nilpotent representations of dimension `dims`, in code order.
    pub fn enumerate_reps(&self, dims: &[usize]) -> Result<Vec<Representation>, HallError> {
        self.guard_dims(dims)?;
        let total = self.code_space(dims).filter(|&t| t <= DENSE_LIMIT).ok_or(HallError::SizeGuard("code space too large"))?;
        Ok((0..total)
            .map(|c| Representation::decode(&self.quiver, dims, self.q, c))
            .filter(|r| self.is_nilpotent(r))
            .collect())
    }

    /// Classes of dimension `dims` with their orbit sizes, in key order.
    pub fn iso_classes(&self, dims: &[usize]) -> Result<Vec<(ClassKey, u64)>, HallError> {
        self.guard_dims(dims)?;
        if entry_count(&self.quiver, dims) == 0 {
            return Ok(vec![(ClassKey { dims: dims.to_vec(), code: 0 }, 1)]);
        }
        self.code_space(dims).filter(|&t| t <= DENSE_LIMIT).ok_or(HallError::SizeGuard("code space too large"))?;
        let dense = self.dense(dims);
        Ok(dense.classes.iter().map(|&(c, n)| (ClassKey { dims: dims.to_vec(), code: c }, n)).collect())
    }

    /// Indecomposable classes of dimension `dims`.
    pub fn indecomposables(&self, dims: &[usize]) -> Result<Vec<ClassKey>, HallError> {
        let mut out = Vec::new();
        for (k, _) in self.iso_classes(dims)? {
            if self.is_indecomposable(&k)? {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// `[m][n] = sum_E h^E_{m,n} [E]` from extension counting:
    /// `h^E = #{X : E_X = E} |Aut E| / (|Aut m| |Aut n| q^{sum_v m_v n_v})`, where
    /// `E_X` has `n` as a subrepresentation and `m` as quotient.
    pub fn product_basis(&self, m: &ClassKey, n: &ClassKey) -> Result<Rc<Vec<(ClassKey, i128)>>, HallError> {
        if m.is_zero() {
            return Ok(Rc::new(vec![(n.clone(), 1)]));
        }
        if n.is_zero() {
            return Ok(Rc::new(vec![(m.clone(), 1)]));
        }
        let pair = (m.clone(), n.clone());
        if let Some(p) = self.state.borrow().products.get(&pair) {
            return Ok(p.clone());
        }
        if m.dims.len() != n.dims.len() || m.dims.len() != self.quiver.vertices().len() {
            return Err(HallError::ShapeMismatch);
        }
        if m.total_dim() + n.total_dim() > MAX_TOTAL_DIM {
            return Err(HallError::SizeGuard("summed dimension above 6"));
        }
        let (mr, nr) = (self.representative(m), self.representative(n));
        let arrows = self.quiver.arrows();
        let shapes: Vec<(usize, usize)> = arrows.iter().map(|a| (n.dims[a.target], m.dims[a.source])).collect();
        let x_len: usize = shapes.iter().map(|(r, c)| r * c).sum();
        let space = checked_pow(self.q as u128, x_len).ok_or(HallError::Overflow)?;
        if space > COUNT_LIMIT {
            return Err(HallError::SizeGuard("extension space too large"));
        }
        let mut counts: BTreeMap<ClassKey, u128> = BTreeMap::new();
        let mut x = vec![0 as Fq; x_len];
        loop {
            let mut offset = 0;
            let maps = arrows
                .iter()
                .enumerate()
                .map(|(ai, a)| {
                    let (r, c) = shapes[ai];
                    let xa = Mat::from_rows(r, c, x[offset..offset + r * c].to_vec());
                    offset += r * c;
                    Mat::blocks(&nr.maps[ai], &xa, &Mat::zero(m.dims[a.target], n.dims[a.source]), &mr.maps[ai])
                })
                .collect();
            let dims = m.dims.iter().zip(&n.dims).map(|(a, b)| a + b).collect();
            *counts.entry(self.canonical(&Representation { dims, maps })?).or_default() += 1;
            if !increment(&mut x, self.q as Fq) {
                break;
            }
        }
        let overlap: usize = m.dims.iter().zip(&n.dims).map(|(a, b)| a * b).sum();
        let denominator = self
            .automorphisms(m)?
            .checked_mul(self.automorphisms(n)?)
            .and_then(|d| d.checked_mul(checked_pow(self.q as u128, overlap)?))
            .ok_or(HallError::Overflow)?;
        let mut out = Vec::with_capacity(counts.len());
        for (e, c) in counts {
            let numerator = c.checked_mul(self.automorphisms(&e)?).ok_or(HallError::Overflow)?;
            if numerator % denominator != 0 {
                return Err(HallError::Internal("Hall number is not integral"));
            }
            out.push((e, i128::try_from(numerator / denominator).map_err(|_| HallError::Overflow)?));
        }
        let out = Rc::new(out);
        self.state.borrow_mut().products.insert(pair, out.clone());
        Ok(out)
    }

    /// Number of subrepresentations `K` of `e` with `K = n` and `e/K = m`,
    /// by enumerating echelon subspaces vertex by vertex.
    pub fn hall_number(&self, e: &ClassKey, m: &ClassKey, n: &ClassKey) -> Result<u64, HallError> {
        let nv = self.quiver.vertices().len();
        if e.dims.len() != nv || m.dims.len() != nv || n.dims.len() != nv {
            return Err(HallError::ShapeMismatch);
        }
        if (0..nv).any(|v| e.dims[v] != m.dims[v] + n.dims[v]) {
            return Err(HallError::DimensionMismatch);
        }
        self.guard_dims(&e.dims)?;
        let f = &self.field;
        let er = self.representative(e);
        let choices: Vec<Vec<Mat>> = (0..nv).map(|v| subspaces(f, e.dims[v], n.dims[v])).collect();
        let tuples = choices.iter().try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128)).ok_or(HallError::Overflow)?;
        if tuples > COUNT_LIMIT {
            return Err(HallError::SizeGuard("too many subspace tuples"));
        }
        let mut pick = vec![0usize; nv];
        let mut count = 0u64;
        'tuples: loop {
            let rows: Vec<&Mat> = (0..nv).map(|v| &choices[v][pick[v]]).collect();
            let bases: Vec<Mat> = rows.iter().map(|r| r.transpose()).collect();
            let stable = self.quiver.arrows().iter().enumerate().all(|(ai, a)| {
                let img = er.maps[ai].mul(f, &bases[a.source]);
                bases[a.target].solve(f, &img).is_some()
            });
            if stable {
                let sub = er.restrict(&self.quiver, f, &bases);
                let quotient = quotient_of(&self.quiver, f, &er, &rows);
                if self.canonical(&sub)? == *n && self.canonical(&quotient)? == *m {
                    count += 1;
                }
            }
            for v in 0..nv {
                pick[v] += 1;
                if pick[v] < choices[v].len() {
                    continue 'tuples;
                }
                pick[v] = 0;
            }
            break;
        }
        Ok(count)
    }

    pub fn element(&self, key: &ClassKey) -> HallElement {
        HallElement::basis(key.clone(), Coefficients::Integers)
    }

    pub fn simple(&self, v: usize) -> HallElement {
        self.element(&self.simple_key(v))
    }

    pub fn one(&self) -> HallElement {
        self.element(&self.zero_key())
    }

    pub fn multiply(&self, x: &HallElement, y: &HallElement) -> Result<HallElement, HallError> {
        if x.ring() != y.ring() {
            return Err(HallError::RingMismatch);
        }
        let mut out = HallElement::zero(x.ring());
        for (a, c) in x.terms() {
            for (b, d) in y.terms() {
                let cd = c.checked_mul(d).ok_or(HallError::Overflow)?;
                for (e, h) in self.product_basis(a, b)?.iter() {
                    out.add_term(e.clone(), cd.checked_mul(*h).ok_or(HallError::Overflow)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn lie_bracket(&self, x: &HallElement, y: &HallElement) -> Result<HallElement, HallError> {
        self.multiply(x, y)?.sub(&self.multiply(y, x)?)
    }

    /// Ordered pairs of classes `(a, b)` with `a + b = key`, each once.
    pub fn splittings(&self, key: &ClassKey) -> Result<Vec<(ClassKey, ClassKey)>, HallError> {
        let summands = self.info(key)?.summands.clone();
        let mut groups: Vec<(ClassKey, usize)> = Vec::new();
        for s in summands {
            match groups.last_mut() {
                Some((k, n)) if *k == s => *n += 1,
                _ => groups.push((s, 1)),
            }
        }
        let mut take = vec![0usize; groups.len()];
        let mut out = Vec::new();
        'choices: loop {
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for ((k, n), &t) in groups.iter().zip(&take) {
                left.extend(core::iter::repeat_n(k.clone(), t));
                right.extend(core::iter::repeat_n(k.clone(), n - t));
            }
            out.push((self.sum_key(&left)?, self.sum_key(&right)?));
            for (i, (_, n)) in groups.iter().enumerate() {
                take[i] += 1;
                if take[i] <= *n {
                    continue 'choices;
                }
                take[i] = 0;
            }
            break;
        }
        Ok(out)
    }

    pub fn comultiply(&self, x: &HallElement) -> Result<TensorElement, HallError> {
        let mut out = TensorElement::zero(x.ring());
        for (k, c) in x.terms() {
            for (a, b) in self.splittings(k)? {
                out.add_term(a, b, c)?;
            }
        }
        Ok(out)
    }

    /// `(a (x) b)(c (x) d) = ac (x) bd`.
    pub fn tensor_multiply(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement, HallError> {
        if x.ring() != y.ring() {
            return Err(HallError::RingMismatch);
        }
        let mut out = TensorElement::zero(x.ring());
        for ((a, b), c) in x.terms() {
            for ((u, v), d) in y.terms() {
                let cd = c.checked_mul(d).ok_or(HallError::Overflow)?;
                let left = self.product_basis(a, u)?;
                let right = self.product_basis(b, v)?;
                for (e, h) in left.iter() {
                    let ch = cd.checked_mul(*h).ok_or(HallError::Overflow)?;
                    for (g, k) in right.iter() {
                        out.add_term(e.clone(), g.clone(), ch.checked_mul(*k).ok_or(HallError::Overflow)?)?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn counit(&self, x: &HallElement) -> i128 {
        x.coefficient(&self.zero_key())
    }

    /// Reduction into `Z/(q-1)`; the flag is set when that ring is zero.
    pub fn reduce_mod(&self, x: &HallElement) -> (HallElement, bool) {
        (x.reduce(self.modulus()), self.modulus() == 1)
    }

    pub fn is_primitive(&self, x: &HallElement) -> Result<bool, HallError> {
        let one = HallElement::basis(self.zero_key(), x.ring());
        let expected = TensorElement::outer(x, &one)?.add(&TensorElement::outer(&one, x)?)?;
        Ok(self.comultiply(x)? == expected)
    }

    /// `Delta(xy) - Delta(x)Delta(y)`, reduced modulo `modulus` when given.
    pub fn bialgebra_defect(&self, x: &HallElement, y: &HallElement, modulus: Option<u64>) -> Result<TensorElement, HallError> {
        let lhs = self.comultiply(&self.multiply(x, y)?)?;
        let rhs = self.tensor_multiply(&self.comultiply(x)?, &self.comultiply(y)?)?;
        let d = lhs.sub(&rhs)?;
        Ok(match modulus {
            Some(m) => d.reduce(m),
            None => d,
        })
    }

    /// All classes with dimension vector componentwise at most `bound`.
    pub fn classes_within(&self, bound: &[usize]) -> Result<Vec<ClassKey>, HallError> {
        if bound.len() != self.quiver.vertices().len() {
            return Err(HallError::ShapeMismatch);
        }
        let mut dims = vec![0usize; bound.len()];
        let mut out = Vec::new();
        'dims: loop {
            out.extend(self.iso_classes(&dims)?.into_iter().map(|(k, _)| k));
            for v in 0..dims.len() {
                dims[v] += 1;
                if dims[v] <= bound[v] {
                    continue 'dims;
                }
                dims[v] = 0;
            }
            break;
        }
        Ok(out)
    }

    /// Checks `Delta(xy) = Delta(x)Delta(y)` modulo `q-1` for every ordered pair
    /// of classes within `bound`.
    pub fn check_bialgebra(&self, bound: &[usize]) -> Result<Report, HallError> {
        if self.modulus() < 2 {
            return Err(HallError::Collapsed);
        }
        let classes = self.classes_within(bound)?;
        let mut report = Report::new();
        for x in &classes {
            for y in &classes {
                let d = self.bialgebra_defect(&self.element(x), &self.element(y), Some(self.modulus()))?;
                let witness = (!d.is_empty()).then(|| self.format_tensor(&d));
                let params = format!("{};{}", self.key_hex(x), self.key_hex(y));
                report.push("bialgebra", self.field.to_string(), params, Verdict::from_bool(d.is_empty()), witness);
            }
        }
        Ok(report)
    }

    /// Evaluates the Serre relators of the quiver's matrix on the simple
    /// classes and reduces modulo `q-1`.
    pub fn serre_probe(&self) -> Result<Report, HallError> {
        let c = self.quiver.cartan_matrix();
        let relators = serre_relators(&c, false);
        let images: Vec<HallElement> = (0..self.quiver.vertices().len()).map(|v| self.simple(v)).collect();
        let collapsed = self.modulus() == 1;
        let mut report = Report::new();
        for r in relators.relators() {
            let value = evaluate(self, &r.element, &images)?.reduce(self.modulus());
            let verdict = if collapsed { Verdict::Vacuous } else { Verdict::from_bool(value.is_zero()) };
            let witness = (verdict == Verdict::Fail).then(|| self.format_element(&value));
            report.push("serre", self.field.to_string(), r.element.display(relators.alphabet()), verdict, witness);
        }
        Ok(report)
    }

    /// `d1,d2,...:digits`, `r` base-`p` digits per entry, most significant first.
    pub fn key_hex(&self, key: &ClassKey) -> String {
        let dims: Vec<String> = key.dims.iter().map(|d| d.to_string()).collect();
        let mut s = dims.join(",");
        s.push(':');
        let rep = self.representative(key);
        for e in rep.entries() {
            for d in self.field.digits(e).iter().rev() {
                s.push(char::from_digit(*d, 10).expect("digit below 10"));
            }
        }
        s
    }

    /// Parses a key; a non-canonical code is replaced by its class.
    pub fn parse_key(&self, s: &str) -> Result<ClassKey, HallError> {
        let bad = || HallError::InvalidKey(s.to_string());
        let (dims, digits) = s.trim().split_once(':').ok_or_else(bad)?;
        let dims: Vec<usize> = dims.split(',').map(|d| d.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        if dims.len() != self.quiver.vertices().len() {
            return Err(bad());
        }
        let r = self.field.exponent() as usize;
        let digits: Vec<u32> = digits.chars().map(|c| c.to_digit(10).filter(|&d| d < self.field.characteristic()).ok_or_else(bad)).collect::<Result<_, _>>()?;
        if digits.len() != r * entry_count(&self.quiver, &dims) {
            return Err(bad());
        }
        let mut rep = Representation::zero(&self.quiver, &dims);
        let mut chunks = digits.chunks(r);
        for m in rep.maps.iter_mut() {
            for x in m.data.iter_mut() {
                let mut d: Vec<u32> = chunks.next().ok_or_else(bad)?.to_vec();
                d.reverse();
                *x = self.field.from_digits(&d);
            }
        }
        self.key_of(&rep)
    }

    /// One term per line: `coeff<TAB>key`.
    pub fn serialize(&self, x: &HallElement) -> String {
        let mut s = String::new();
        for (k, c) in x.terms() {
            s.push_str(&format!("{c}\t{}\n", self.key_hex(k)));
        }
        s
    }

    pub fn parse_element(&self, text: &str) -> Result<HallElement, HallError> {
        let mut x = HallElement::zero(Coefficients::Integers);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| HallError::Parse { line: i + 1, message };
            let (c, k) = line.split_once(char::is_whitespace).ok_or_else(|| err("expected coefficient and class key".into()))?;
            let c: i128 = c.parse().map_err(|_| err(format!("bad coefficient {c:?}")))?;
            let k = self.parse_key(k.trim()).map_err(|e| err(e.to_string()))?;
            x.add_term(k, c)?;
        }
        Ok(x)
    }

    /// Compact single-line form `c*key;c*key`, or `0`.
    pub fn format_element(&self, x: &HallElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = x.terms().map(|(k, c)| format!("{c}*{}", self.key_hex(k))).collect();
        parts.join(";")
    }

    pub fn format_tensor(&self, x: &TensorElement) -> String {
        if x.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> =
            x.terms().map(|((a, b), c)| format!("{c}*{}|{}", self.key_hex(a), self.key_hex(b))).collect();
        parts.join(";")
    }
}

/// The quotient `e / U` in coordinates of the non-pivot columns of the echelon
/// bases `rows`.
fn quotient_of(quiver: &Quiver, f: &FiniteField, e: &Representation, rows: &[&Mat]) -> Representation {
    let pivots: Vec<Vec<usize>> = rows
        .iter()
        .map(|r| (0..r.rows).map(|i| (0..r.cols).find(|&j| r.get(i, j) != 0).expect("echelon row")).collect())
        .collect();
    let free: Vec<Vec<usize>> =
        e.dims.iter().zip(&pivots).map(|(&d, p)| (0..d).filter(|j| !p.contains(j)).collect()).collect();
    let maps = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let (s, t) = (a.source, a.target);
            let mut out = Mat::zero(free[t].len(), free[s].len());
            for (col, &j) in free[s].iter().enumerate() {
                let mut x: Vec<Fq> = (0..e.dims[t]).map(|i| e.maps[ai].get(i, j)).collect();
                for (ri, &p) in pivots[t].iter().enumerate() {
                    let c = x[p];
                    if c != 0 {
                        for k in 0..x.len() {
                            x[k] = f.sub(x[k], f.mul(c, rows[t].get(ri, k)));
                        }
                    }
                }
                for (row, &i) in free[t].iter().enumerate() {
                    out.set(row, col, x[i]);
                }
            }
            out
        })
        .collect();
    Representation { dims: free.iter().map(Vec::len).collect(), maps }
}

impl LieModel for HallAlgebra {
    type Value = HallElement;
    type Error = HallError;

    fn bracket(&self, x: &HallElement, y: &HallElement) -> Result<HallElement, HallError> {
        self.lie_bracket(x, y)
    }

    fn combine(&self, terms: &[(BigRational, HallElement)]) -> Result<HallElement, HallError> {
        let mut out = HallElement::zero(Coefficients::Integers);
        for (c, v) in terms {
            if !c.is_integer() {
                return Err(HallError::NonIntegral);
            }
            let c = c.to_integer().to_i128().ok_or(HallError::Overflow)?;
            out = out.add(&v.scale(c)?)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
