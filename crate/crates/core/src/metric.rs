//! Extended metrics on finite index sets.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use thiserror::Error;

use crate::partition::Partition;
use crate::scalar::Scalar;

/// A distance in `[0, ∞]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtDistance<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> ExtDistance<T> {
    pub fn zero() -> Self {
        ExtDistance::Finite(T::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtDistance::Finite(v) if v.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtDistance::Finite(_))
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            ExtDistance::Finite(v) => Some(v),
            ExtDistance::Infinite => None,
        }
    }

    /// `self ≤ eps` for a finite bound.
    pub fn within(&self, eps: &T) -> bool {
        match self {
            ExtDistance::Finite(v) => v <= eps,
            ExtDistance::Infinite => false,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Multiplies a finite distance by `factor`; infinity stays infinite.
    pub fn scale(&self, factor: &T) -> Self {
        match self {
            ExtDistance::Finite(v) => ExtDistance::Finite(v.clone() * factor.clone()),
            ExtDistance::Infinite => ExtDistance::Infinite,
        }
    }

    /// Parses `inf` or a nonnegative scalar literal.
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("inf") || text == "∞" {
            return Some(ExtDistance::Infinite);
        }
        T::from_literal(text).map(ExtDistance::Finite)
    }

    /// Renders with an optional decimal approximation next to the exact value.
    pub fn render(&self, decimal: Option<usize>) -> String {
        match (self, decimal) {
            (ExtDistance::Finite(v), Some(k)) => format!("{v} (~{})", v.to_decimal(k)),
            _ => self.to_string(),
        }
    }
}

impl<T: Scalar> PartialOrd for ExtDistance<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtDistance::Finite(a), ExtDistance::Finite(b)) => a.partial_cmp(b),
            (ExtDistance::Finite(_), ExtDistance::Infinite) => Some(Ordering::Less),
            (ExtDistance::Infinite, ExtDistance::Finite(_)) => Some(Ordering::Greater),
            (ExtDistance::Infinite, ExtDistance::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl<T: Scalar + Eq + Ord> Ord for ExtDistance<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).expect("totally ordered scalar")
    }
}

impl<T: Scalar> Add for ExtDistance<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtDistance::Finite(a), ExtDistance::Finite(b)) => ExtDistance::Finite(a + b),
            _ => ExtDistance::Infinite,
        }
    }
}

impl<T: Scalar> Add for &ExtDistance<T> {
    type Output = ExtDistance<T>;

    fn add(self, rhs: Self) -> ExtDistance<T> {
        match (self, rhs) {
            (ExtDistance::Finite(a), ExtDistance::Finite(b)) => {
                ExtDistance::Finite(a.clone() + b.clone())
            }
            _ => ExtDistance::Infinite,
        }
    }
}

impl<T: Scalar> From<T> for ExtDistance<T> {
    fn from(value: T) -> Self {
        ExtDistance::Finite(value)
    }
}

impl<T: fmt::Display> fmt::Display for ExtDistance<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDistance::Finite(v) => write!(f, "{v}"),
            ExtDistance::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("empty carriers are not allowed")]
    Empty,
}

/// The first failed metric axiom, with witness indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `d(i, i) ≠ 0`.
    NonZeroDiagonal(usize),
    /// `d(i, j) < 0`.
    Negative(usize, usize),
    /// `d(i, j) = 0` with `i ≠ j`.
    Indiscernible(usize, usize),
    /// `d(i, j) ≠ d(j, i)`.
    Asymmetric(usize, usize),
    /// `d(i, j) > d(i, k) + d(k, j)`, reported as `(i, j, k)`.
    Triangle(usize, usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonZeroDiagonal(i) => write!(f, "nonzero self-distance at {i}"),
            Violation::Negative(i, j) => write!(f, "negative distance between {i} and {j}"),
            Violation::Indiscernible(i, j) => {
                write!(f, "identity of indiscernibles fails: d({i},{j}) = 0")
            }
            Violation::Asymmetric(i, j) => write!(f, "symmetry fails: d({i},{j}) != d({j},{i})"),
            Violation::Triangle(i, j, k) => {
                write!(f, "triangle inequality fails: d({i},{j}) > d({i},{k}) + d({k},{j})")
            }
        }
    }
}

/// Square matrix of extended distances, row-major.
///
/// Construction only checks the shape; use [`DistMatrix::check_axioms`] to
/// validate a candidate metric.
#[derive(Clone, Debug, PartialEq)]
pub struct DistMatrix<T> {
    n: usize,
    entries: Vec<ExtDistance<T>>,
}

impl<T: Scalar> DistMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<ExtDistance<T>>>) -> Result<Self, MetricError> {
        let n = rows.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (row, values) in rows.into_iter().enumerate() {
            if values.len() != n {
                return Err(MetricError::NotSquare { row, len: values.len(), expected: n });
            }
            entries.extend(values);
        }
        Ok(DistMatrix { n, entries })
    }

    /// Builds a matrix from a distance function over `0..n`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> ExtDistance<T>) -> Self {
        assert!(n > 0, "empty carriers are not allowed");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        DistMatrix { n, entries }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtDistance<T> {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: ExtDistance<T>) {
        self.entries[i * self.n + j] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ExtDistance<T>]> {
        self.entries.chunks(self.n)
    }

    /// Checks the extended-metric axioms in a fixed order: diagonal,
    /// nonnegativity, separation and symmetry over pairs `(i, j)`, then the
    /// triangle inequality over triples `(i, j, k)` in lexicographic order.
    pub fn check_axioms(&self) -> Result<(), Violation> {
        let n = self.n;
        let zero = ExtDistance::<T>::zero();
        for i in 0..n {
            if !self.get(i, i).is_zero() {
                return Err(Violation::NonZeroDiagonal(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if *self.get(i, j) < zero {
                    return Err(Violation::Negative(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.get(i, j).is_zero() {
                    return Err(Violation::Indiscernible(i, j));
                }
                if self.get(i, j) != self.get(j, i) {
                    return Err(Violation::Asymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if *self.get(i, j) > self.get(i, k) + self.get(k, j) {
                        return Err(Violation::Triangle(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Distinct finite and infinite values occurring off the diagonal and on it.
    pub fn realized_values(&self) -> Vec<ExtDistance<T>> {
        let mut out: Vec<ExtDistance<T>> = Vec::new();
        for d in &self.entries {
            if !out.contains(d) {
                out.push(d.clone());
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        out
    }

    /// Least distance between distinct points, `None` for a one-point space.
    pub fn min_positive(&self) -> Option<ExtDistance<T>> {
        let mut best: Option<ExtDistance<T>> = None;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    let d = self.get(i, j).clone();
                    best = Some(match best {
                        Some(b) => b.min(d),
                        None => d,
                    });
                }
            }
        }
        best
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: &T) -> Self {
        DistMatrix { n: self.n, entries: self.entries.iter().map(|d| d.scale(factor)).collect() }
    }

    /// Restriction to the given indices, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        DistMatrix::from_fn(indices.len(), |i, j| self.get(indices[i], indices[j]).clone())
    }
}

/// Mixed-radix indexing of a cartesian product; the first factor is the most
/// significant digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductIndex {
    radices: Vec<usize>,
}

impl ProductIndex {
    pub fn new(radices: Vec<usize>) -> Self {
        ProductIndex { radices }
    }

    /// Number of tuples, or `None` on overflow.
    pub fn size(&self) -> Option<usize> {
        self.radices.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r))
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.radices).fold(0, |acc, (&x, &r)| acc * r + x)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.radices.len()];
        for (slot, &r) in out.iter_mut().zip(&self.radices).rev() {
            *slot = index % r;
            index /= r;
        }
        out
    }
}

/// Sup-metric product. The empty product is the one-point space.
pub fn sup_product<T: Scalar>(factors: &[DistMatrix<T>]) -> DistMatrix<T> {
    let index = ProductIndex::new(factors.iter().map(DistMatrix::len).collect());
    let size = index.size().expect("product size overflows usize");
    let tuples: Vec<Vec<usize>> = (0..size).map(|i| index.decode(i)).collect();
    DistMatrix::from_fn(size, |a, b| {
        factors.iter().enumerate().fold(ExtDistance::zero(), |acc, (f, m)| {
            acc.max(m.get(tuples[a][f], tuples[b][f]).clone())
        })
    })
}

/// Discrete metric: distinct points are infinitely far apart.
pub fn discrete_metric<T: Scalar>(n: usize) -> Result<DistMatrix<T>, MetricError> {
    if n == 0 {
        return Err(MetricError::Empty);
    }
    Ok(DistMatrix::from_fn(
        n,
        |i, j| if i == j { ExtDistance::zero() } else { ExtDistance::Infinite },
    ))
}

/// All-pairs shortest-path closure (Floyd–Warshall) of a symmetric weight
/// matrix; the diagonal is forced to zero.
pub fn shortest_path_closure<T: Scalar>(weights: &DistMatrix<T>) -> DistMatrix<T> {
    let n = weights.len();
    let mut out = weights.clone();
    for i in 0..n {
        out.set(i, i, ExtDistance::zero());
    }
    for k in 0..n {
        for i in 0..n {
            if !out.get(i, k).is_finite() {
                continue;
            }
            for j in 0..n {
                let via = out.get(i, k) + out.get(k, j);
                if via < *out.get(i, j) {
                    out.set(i, j, via);
                }
            }
        }
    }
    out
}

/// The greatest metric on the blocks of `partition` for which the projection
/// is non-expansive: cross-block minima closed under shortest paths.
pub fn quotient_metric<T: Scalar>(metric: &DistMatrix<T>, partition: &Partition) -> DistMatrix<T> {
    assert_eq!(metric.len(), partition.carrier_len(), "partition does not cover the metric");
    let blocks = partition.blocks();
    let weights = DistMatrix::from_fn(blocks.len(), |u, v| {
        let mut best = ExtDistance::Infinite;
        for &a in &blocks[u] {
            for &b in &blocks[v] {
                best = best.min(metric.get(a, b).clone());
            }
        }
        best
    });
    let closed = shortest_path_closure(&weights);
    // Cross-block minima of a true metric are positive, and so are their path sums.
    for u in 0..blocks.len() {
        for v in 0..blocks.len() {
            assert!(u == v || !closed.get(u, v).is_zero(), "quotient metric lost separation");
        }
    }
    closed
}
