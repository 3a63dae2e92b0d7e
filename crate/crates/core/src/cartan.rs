//! Borcherds–Cartan matrices, quivers and the doubling constructions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

/// One of the three defining conditions of a Borcherds–Cartan matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// Diagonal entries are 2 or nonpositive.
    Diagonal,
    /// Off-diagonal entries are nonpositive.
    OffDiagonal,
    /// The zero pattern is symmetric.
    ZeroPattern,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Diagonal => "BC1",
            Condition::OffDiagonal => "BC2",
            Condition::ZeroPattern => "BC3",
        })
    }
}

/// A violated condition at a zero-based matrix position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub condition: Condition,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at ({},{})", self.condition, self.row + 1, self.col + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationError {
    Empty,
    NotSquare { row: usize, len: usize, expected: usize },
    LabelCount { labels: usize, size: usize },
    Violations(Vec<Violation>),
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::Empty => f.write_str("matrix is empty"),
            ValidationError::NotSquare { row, len, expected } => write!(
                f,
                "matrix is not square: row {} has {} entries, expected {}",
                row + 1,
                len,
                expected
            ),
            ValidationError::LabelCount { labels, size } => {
                write!(f, "{labels} labels supplied for a matrix of size {size}")
            }
            ValidationError::Violations(vs) => {
                f.write_str("violations:")?;
                for v in vs {
                    write!(f, " {v}")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for ValidationError {}

/// A validated Borcherds–Cartan matrix with index labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    labels: Vec<String>,
    size: usize,
    entries: Vec<i64>,
}

/// Positive integers `eps` with `eps[i] * a[i][j] == eps[j] * a[j][i]` and gcd 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symmetrizer(pub Vec<u64>);

fn check_shape(rows: &[Vec<i64>]) -> Result<usize, ValidationError> {
    let n = rows.len();
    if n == 0 {
        return Err(ValidationError::Empty);
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(ValidationError::NotSquare { row: i, len: r.len(), expected: n });
        }
    }
    Ok(n)
}

/// Every violated (condition, position) pair, in row-major order.
pub fn violations(rows: &[Vec<i64>]) -> Result<Vec<Violation>, ValidationError> {
    let n = check_shape(rows)?;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let a = rows[i][j];
            if i == j {
                if a != 2 && a > 0 {
                    out.push(Violation { condition: Condition::Diagonal, row: i, col: j });
                }
                continue;
            }
            if a > 0 {
                out.push(Violation { condition: Condition::OffDiagonal, row: i, col: j });
            }
            if a != 0 && rows[j][i] == 0 {
                out.push(Violation { condition: Condition::ZeroPattern, row: i, col: j });
            }
        }
    }
    Ok(out)
}

/// Validates a raw integer matrix, labelling indices `1..=n`.
pub fn validate(rows: &[Vec<i64>]) -> Result<CartanMatrix, ValidationError> {
    let n = check_shape(rows)?;
    let labels = (1..=n).map(|i| i.to_string()).collect();
    CartanMatrix::with_labels(labels, rows)
}

impl CartanMatrix {
    pub fn with_labels(labels: Vec<String>, rows: &[Vec<i64>]) -> Result<Self, ValidationError> {
        let n = check_shape(rows)?;
        if labels.len() != n {
            return Err(ValidationError::LabelCount { labels: labels.len(), size: n });
        }
        let vs = violations(rows)?;
        if !vs.is_empty() {
            return Err(ValidationError::Violations(vs));
        }
        Ok(CartanMatrix { labels, size: n, entries: rows.concat() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.size + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    /// Indices with nonpositive diagonal entry.
    pub fn imaginary_indices(&self) -> Vec<usize> {
        (0..self.size).filter(|&i| self.entry(i, i) <= 0).collect()
    }

    /// Minimal positive symmetrizer, or `None` when the constraints force a
    /// nonpositive or inconsistent solution.
    pub fn symmetrize(&self) -> Option<Symmetrizer> {
        let n = self.size;
        // eps as exact fractions num/den, propagated along nonzero entries.
        let mut eps: Vec<Option<(i128, i128)>> = vec![None; n];
        let mut out = vec![0u64; n];
        for root in 0..n {
            if eps[root].is_some() {
                continue;
            }
            eps[root] = Some((1, 1));
            let mut component = vec![root];
            let mut stack = vec![root];
            while let Some(i) = stack.pop() {
                let (ni, di) = eps[i].unwrap();
                for j in 0..n {
                    let (aij, aji) = (self.entry(i, j) as i128, self.entry(j, i) as i128);
                    if j == i || aij == 0 {
                        continue;
                    }
                    // eps_j = eps_i * a_ij / a_ji
                    let (mut nj, mut dj) = (ni * aij, di * aji);
                    if dj < 0 {
                        nj = -nj;
                        dj = -dj;
                    }
                    let g = nj.gcd(&dj);
                    let cand = (nj / g, dj / g);
                    match eps[j] {
                        None => {
                            eps[j] = Some(cand);
                            component.push(j);
                            stack.push(j);
                        }
                        Some(e) if e != cand => return None,
                        Some(_) => {}
                    }
                }
            }
            let l = component.iter().fold(1i128, |acc, &i| acc.lcm(&eps[i].unwrap().1));
            let scaled: Vec<i128> = component
                .iter()
                .map(|&i| {
                    let (num, den) = eps[i].unwrap();
                    num * (l / den)
                })
                .collect();
            if scaled.iter().any(|&v| v <= 0) {
                return None;
            }
            let g = scaled.iter().fold(0i128, |acc, v| acc.gcd(v));
            for (&i, v) in component.iter().zip(scaled) {
                out[i] = (v / g) as u64;
            }
        }
        Some(Symmetrizer(out))
    }

    /// The doubled matrix `[[C, -2I], [-2I, C]]` over indices `(+, i)` then `(-, i)`.
    pub fn double(&self) -> CartanMatrix {
        let n = self.size;
        let mut rows = vec![vec![0i64; 2 * n]; 2 * n];
        for (a, row) in rows.iter_mut().enumerate() {
            for (b, x) in row.iter_mut().enumerate() {
                let (i, j) = (a % n, b % n);
                *x = if (a < n) == (b < n) {
                    self.entry(i, j)
                } else if i == j {
                    -2
                } else {
                    0
                };
            }
        }
        let labels = SignedIndex::all(n).map(|s| s.label(&self.labels)).collect();
        CartanMatrix { labels, size: 2 * n, entries: rows.concat() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// An index of the doubled set `{+, -} x I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedIndex {
    pub sign: Sign,
    pub base: usize,
}

impl SignedIndex {
    /// All signed indices in the doubled order.
    pub fn all(n: usize) -> impl Iterator<Item = SignedIndex> {
        [Sign::Plus, Sign::Minus]
            .into_iter()
            .flat_map(move |sign| (0..n).map(move |base| SignedIndex { sign, base }))
    }

    /// Position in the doubled order.
    pub fn position(self, n: usize) -> usize {
        match self.sign {
            Sign::Plus => self.base,
            Sign::Minus => n + self.base,
        }
    }

    pub fn label(self, base_labels: &[String]) -> String {
        format!("{}{}", self.sign.symbol(), base_labels[self.base])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuiverError {
    DuplicateVertex(String),
    DuplicateArrow(String),
    UnknownVertex(String),
}

impl fmt::Display for QuiverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuiverError::DuplicateVertex(v) => write!(f, "duplicate vertex {v}"),
            QuiverError::DuplicateArrow(a) => write!(f, "duplicate arrow {a}"),
            QuiverError::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
        }
    }
}

impl core::error::Error for QuiverError {}

/// A finite quiver; parallel arrows and loops are separate records.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<usize, QuiverError> {
        if self.vertex_index(name).is_some() {
            return Err(QuiverError::DuplicateVertex(name.to_string()));
        }
        self.vertices.push(name.to_string());
        Ok(self.vertices.len() - 1)
    }

    pub fn add_arrow(&mut self, name: &str, source: &str, target: &str) -> Result<usize, QuiverError> {
        if self.arrows.iter().any(|a| a.name == name) {
            return Err(QuiverError::DuplicateArrow(name.to_string()));
        }
        let s = self.vertex_index(source).ok_or_else(|| QuiverError::UnknownVertex(source.to_string()))?;
        let t = self.vertex_index(target).ok_or_else(|| QuiverError::UnknownVertex(target.to_string()))?;
        self.arrows.push(Arrow { name: name.to_string(), source: s, target: t });
        Ok(self.arrows.len() - 1)
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// One vertex, one loop.
    pub fn jordan() -> Self {
        let mut q = Quiver::new();
        q.add_vertex("1").unwrap();
        q.add_arrow("x", "1", "1").unwrap();
        q
    }

    /// Vertices `+`, `-` and two arrows `+ -> -`.
    pub fn kronecker() -> Self {
        let mut q = Quiver::new();
        q.add_vertex("+").unwrap();
        q.add_vertex("-").unwrap();
        q.add_arrow("alpha", "+", "-").unwrap();
        q.add_arrow("beta", "+", "-").unwrap();
        q
    }

    /// `1 -> 2`.
    pub fn a2() -> Self {
        let mut q = Quiver::new();
        q.add_vertex("1").unwrap();
        q.add_vertex("2").unwrap();
        q.add_arrow("x", "1", "2").unwrap();
        q
    }

    /// `n` vertices and no arrows.
    pub fn arrowless(n: usize) -> Self {
        let mut q = Quiver::new();
        for i in 1..=n {
            q.add_vertex(&i.to_string()).unwrap();
        }
        q
    }

    pub fn has_oriented_cycle(&self) -> bool {
        // Kahn's algorithm; loops count as cycles.
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    ready.push(a.target);
                }
            }
        }
        seen < n
    }

    /// `a_ii = 2(1 - loops at i)`, `a_ij = -(arrows between i and j)`.
    pub fn cartan_matrix(&self) -> CartanMatrix {
        let n = self.vertices.len();
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 2;
        }
        for a in &self.arrows {
            if a.source == a.target {
                rows[a.source][a.source] -= 2;
            } else {
                rows[a.source][a.target] -= 1;
                rows[a.target][a.source] -= 1;
            }
        }
        CartanMatrix { labels: self.vertices.clone(), size: n, entries: rows.concat() }
    }

    /// The product with the Kronecker quiver: vertices `(i, +)` then `(i, -)`,
    /// arrows `alpha.i, beta.i : (i,+) -> (i,-)` then `(a, +)`, `(a, -)`.
    pub fn product_with_kronecker(&self) -> Quiver {
        let n = self.vertices.len();
        let mut q = Quiver::new();
        for s in SignedIndex::all(n) {
            q.vertices.push(s.label(&self.vertices));
        }
        for i in 0..n {
            let (plus, minus) = (i, n + i);
            for greek in ["alpha", "beta"] {
                q.arrows.push(Arrow { name: format!("{greek}.{}", self.vertices[i]), source: plus, target: minus });
            }
        }
        for sign in [Sign::Plus, Sign::Minus] {
            for a in &self.arrows {
                let at = |base| SignedIndex { sign, base }.position(n);
                q.arrows.push(Arrow {
                    name: format!("{}{}", sign.symbol(), a.name),
                    source: at(a.source),
                    target: at(a.target),
                });
            }
        }
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn validation_examples() {
        assert!(validate(&m(&[&[2, -1], &[-1, 2]])).is_ok());
        let bc3 = violations(&m(&[&[2, -1], &[0, 2]])).unwrap();
        assert_eq!(bc3, vec![Violation { condition: Condition::ZeroPattern, row: 0, col: 1 }]);
        let bc1 = violations(&m(&[&[3, -1], &[-1, 2]])).unwrap();
        assert_eq!(bc1, vec![Violation { condition: Condition::Diagonal, row: 0, col: 0 }]);
        let bc2 = violations(&m(&[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!(
            bc2,
            vec![
                Violation { condition: Condition::OffDiagonal, row: 0, col: 1 },
                Violation { condition: Condition::OffDiagonal, row: 1, col: 0 },
            ]
        );
        assert!(matches!(validate(&m(&[&[2, -1]])), Err(ValidationError::NotSquare { .. })));
    }

    // Brute-force search over small positive vectors.
    fn brute_symmetrizer(c: &CartanMatrix) -> Option<Vec<u64>> {
        let n = c.size();
        let mut eps = vec![1u64; n];
        loop {
            let ok = (0..n).all(|i| {
                (0..n).all(|j| eps[i] as i64 * c.entry(i, j) == eps[j] as i64 * c.entry(j, i))
            });
            if ok {
                return Some(eps);
            }
            let mut k = 0;
            while k < n && eps[k] == 6 {
                eps[k] = 1;
                k += 1;
            }
            if k == n {
                return None;
            }
            eps[k] += 1;
        }
    }

    #[test]
    fn symmetrizer_examples() {
        let c = validate(&m(&[&[2, -2], &[-1, 2]])).unwrap();
        assert_eq!(c.symmetrize().unwrap().0, vec![1, 2]);
        assert_eq!(brute_symmetrizer(&c).unwrap(), vec![1, 2]);
        let c = validate(&m(&[&[2, -1], &[-3, 2]])).unwrap();
        assert_eq!(c.symmetrize().unwrap().0, vec![3, 1]);
        assert_eq!(brute_symmetrizer(&c).unwrap(), vec![3, 1]);
        let a2 = validate(&m(&[&[2, -1], &[-1, 2]])).unwrap();
        assert_eq!(a2.symmetrize().unwrap().0, vec![1, 1]);
        // a 3-cycle with inconsistent ratios
        let bad = validate(&m(&[&[2, -1, -1], &[-2, 2, -1], &[-1, -1, 2]])).unwrap();
        assert_eq!(bad.symmetrize(), None);
        assert_eq!(brute_symmetrizer(&bad), None);
    }

    #[test]
    fn doubling_examples() {
        let c = validate(&m(&[&[2]])).unwrap();
        assert_eq!(c.double().rows(), m(&[&[2, -2], &[-2, 2]]));
        let a2 = validate(&m(&[&[2, -1], &[-1, 2]])).unwrap();
        assert_eq!(
            a2.double().rows(),
            m(&[&[2, -1, -2, 0], &[-1, 2, 0, -2], &[-2, 0, 2, -1], &[0, -2, -1, 2]])
        );
        assert_eq!(a2.double().labels(), &["+1", "+2", "-1", "-2"]);
        let c = validate(&m(&[&[2, -2], &[-1, 2]])).unwrap();
        assert_eq!(c.double().symmetrize().unwrap().0, vec![1, 2, 1, 2]);
    }

    #[test]
    fn quiver_matrices() {
        assert_eq!(Quiver::jordan().cartan_matrix().rows(), m(&[&[0]]));
        assert_eq!(Quiver::kronecker().cartan_matrix().rows(), m(&[&[2, -2], &[-2, 2]]));
        assert_eq!(Quiver::arrowless(1).cartan_matrix().rows(), m(&[&[2]]));
        let k = Quiver::arrowless(1).product_with_kronecker();
        assert_eq!(k.vertices().len(), 2);
        assert_eq!(k.arrows().len(), 2);
        assert!(k.arrows().iter().all(|a| a.source == 0 && a.target == 1));
        let a2 = Quiver::a2();
        assert_eq!(a2.product_with_kronecker().cartan_matrix(), a2.cartan_matrix().double());
    }

    #[test]
    fn cycles() {
        assert!(Quiver::jordan().has_oriented_cycle());
        assert!(!Quiver::kronecker().has_oriented_cycle());
        let mut q = Quiver::arrowless(2);
        q.add_arrow("a", "1", "2").unwrap();
        q.add_arrow("b", "2", "1").unwrap();
        assert!(q.has_oriented_cycle());
        assert_eq!(q.add_arrow("c", "1", "9"), Err(QuiverError::UnknownVertex("9".into())));
    }
}
