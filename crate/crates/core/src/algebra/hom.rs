use std::fmt;
use std::sync::Arc;

use crate::metric::{ExtDistance, ProductIndex};
use crate::scalar::Scalar;

use super::MetricAlgebra;

/// Why a map between carriers is not a Σ-homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomDefect {
    SignatureMismatch,
    /// The map is not defined on exactly the source carrier.
    DomainSize {
        expected: usize,
        found: usize,
    },
    /// `map[element]` lies outside the target carrier.
    OutOfRange {
        element: usize,
        value: usize,
    },
    /// `f(σ(args)) ≠ σ(f(args))`.
    NotPreserved {
        symbol: String,
        args: Vec<usize>,
    },
}

impl fmt::Display for HomDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomDefect::SignatureMismatch => f.write_str("source and target signatures differ"),
            HomDefect::DomainSize { expected, found } => {
                write!(f, "map has {found} entries, source carrier has {expected}")
            }
            HomDefect::OutOfRange { element, value } => {
                write!(f, "element {element} maps to {value}, outside the target")
            }
            HomDefect::NotPreserved { symbol, args } => {
                write!(f, "operation `{symbol}` not preserved at {args:?}")
            }
        }
    }
}

/// A verified Σ-homomorphism together with its metric properties.
#[derive(Clone, Debug)]
pub struct Homomorphism<T> {
    source: Arc<MetricAlgebra<T>>,
    target: Arc<MetricAlgebra<T>>,
    map: Vec<usize>,
    non_expansive: bool,
    surjective: bool,
    isometric: bool,
}

impl<T: Scalar> Homomorphism<T> {
    pub fn source(&self) -> &Arc<MetricAlgebra<T>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MetricAlgebra<T>> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Non-expansive homomorphisms are M-homomorphisms.
    pub fn is_non_expansive(&self) -> bool {
        self.non_expansive
    }

    pub fn is_m_homomorphism(&self) -> bool {
        self.non_expansive
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn is_isometric(&self) -> bool {
        self.isometric
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// First pair `(a, b)` with `d(f a, f b) > d(a, b)`.
    /// `(d(a, b), d(h a, h b))`.
    pub fn distances(&self, a: usize, b: usize) -> (ExtDistance<T>, ExtDistance<T>) {
        (self.source.d(a, b).clone(), self.target.d(self.map[a], self.map[b]).clone())
    }

    pub fn expansion_witness(&self) -> Option<(usize, usize)> {
        let n = self.source.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.target.d(self.map[a], self.map[b]) > self.source.d(a, b))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Homomorphism<T>) -> Homomorphism<T> {
        assert!(same_algebra(&self.target, &next.source), "composition of mismatched maps");
        let map = self.map.iter().map(|&x| next.map[x]).collect();
        check_homomorphism(map, self.source.clone(), next.target.clone())
            .expect("composite of homomorphisms is a homomorphism")
    }
}

pub(crate) fn same_algebra<T: Scalar>(
    a: &Arc<MetricAlgebra<T>>,
    b: &Arc<MetricAlgebra<T>>,
) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Verifies that `map` preserves every operation and computes the metric
/// flags.
pub fn check_homomorphism<T: Scalar>(
    map: Vec<usize>,
    source: impl Into<Arc<MetricAlgebra<T>>>,
    target: impl Into<Arc<MetricAlgebra<T>>>,
) -> Result<Homomorphism<T>, HomDefect> {
    let source = source.into();
    let target = target.into();
    if source.signature() != target.signature() {
        return Err(HomDefect::SignatureMismatch);
    }
    let n = source.len();
    if map.len() != n {
        return Err(HomDefect::DomainSize { expected: n, found: map.len() });
    }
    if let Some((element, &value)) = map.iter().enumerate().find(|(_, &v)| v >= target.len()) {
        return Err(HomDefect::OutOfRange { element, value });
    }
    for (op, sym) in source.signature().symbols().iter().enumerate() {
        let index = ProductIndex::new(vec![n; sym.arity]);
        let size = index.size().expect("table size overflows usize");
        for i in 0..size {
            let args = index.decode(i);
            let image: Vec<usize> = args.iter().map(|&a| map[a]).collect();
            if map[source.apply(op, &args)] != target.apply(op, &image) {
                return Err(HomDefect::NotPreserved { symbol: sym.name.clone(), args });
            }
        }
    }
    let mut hit = vec![false; target.len()];
    map.iter().for_each(|&y| hit[y] = true);
    let surjective = hit.iter().all(|&h| h);
    let mut non_expansive = true;
    let mut isometric = true;
    for a in 0..n {
        for b in 0..n {
            let before = source.d(a, b);
            let after = target.d(map[a], map[b]);
            if after > before {
                non_expansive = false;
            }
            if after != before {
                isometric = false;
            }
        }
    }
    Ok(Homomorphism { source, target, map, non_expansive, surjective, isometric })
}
