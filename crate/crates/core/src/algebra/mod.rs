//! Finite metric Σ-algebras.
//!
//! Carrier elements are the indices `0..n`; display names are carried along
//! for I/O but never consulted by the algorithms.

mod congruence;
mod construct;
mod factor;
mod hom;

use std::fmt;

use thiserror::Error;

use crate::metric::{DistMatrix, ExtDistance, ProductIndex, Violation};
use crate::scalar::Scalar;
use crate::term::Signature;

pub use congruence::{enumerate_congruences, is_congruence, CongruenceFailure};
pub use construct::{
    generated_subalgebra, m_product, m_quotient, scale_metric, MProduct, MQuotient, Subalgebra,
};
pub use factor::{factor_homomorphism, factor_m_homomorphism, FactorError};
pub use hom::{check_homomorphism, HomDefect, Homomorphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid algebra: {}", join_defects(.0))]
    Invalid(Vec<Defect>),
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("{what} would have {size} elements, above the limit of {limit}")]
    TooLarge { what: &'static str, size: String, limit: usize },
    #[error("the generated subalgebra is empty (no generators and no constants)")]
    EmptyClosure,
    #[error("element {0} is outside the carrier")]
    OutOfRange(usize),
    #[error("scale factor must satisfy 0 < c <= 1, got {0}")]
    BadScale(String),
    #[error("partition covers {found} elements, carrier has {expected}")]
    PartitionSize { expected: usize, found: usize },
    #[error("not a congruence: {0}")]
    NotCongruence(CongruenceFailure),
}

fn join_defects(defects: &[Defect]) -> String {
    defects.iter().map(Defect::to_string).collect::<Vec<_>>().join("; ")
}

/// Why a candidate algebra is not a valid finite metric algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Defect {
    EmptyCarrier,
    NameCount { names: usize, carrier: usize },
    DuplicateName(String),
    MetricSize { expected: usize, found: usize },
    Metric(Violation),
    TableCount { expected: usize, found: usize },
    TableArity { symbol: String, expected: usize, found: usize },
    TableSize { symbol: String, expected: usize, found: usize },
    TableRange { symbol: String, args: Vec<usize>, value: usize },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::EmptyCarrier => f.write_str("empty carrier"),
            Defect::NameCount { names, carrier } => {
                write!(f, "{names} element names for a carrier of size {carrier}")
            }
            Defect::DuplicateName(n) => write!(f, "duplicate element name `{n}`"),
            Defect::MetricSize { expected, found } => {
                write!(f, "distance matrix has size {found}, expected {expected}")
            }
            Defect::Metric(v) => write!(f, "metric: {v}"),
            Defect::TableCount { expected, found } => {
                write!(f, "{found} operation tables for {expected} symbols")
            }
            Defect::TableArity { symbol, expected, found } => {
                write!(f, "table `{symbol}` has arity {found}, signature says {expected}")
            }
            Defect::TableSize { symbol, expected, found } => {
                write!(f, "table `{symbol}` has {found} cells, expected {expected}")
            }
            Defect::TableRange { symbol, args, value } => {
                write!(f, "table `{symbol}` at {args:?} gives {value}, outside the carrier")
            }
        }
    }
}

/// Total operation table over `A^arity`, stored row-major with the first
/// argument most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpTable {
    arity: usize,
    cells: Vec<usize>,
}

impl OpTable {
    pub fn new(arity: usize, cells: Vec<usize>) -> Self {
        OpTable { arity, cells }
    }

    /// Table of `f` over all argument tuples of a carrier of size `n`.
    pub fn from_fn(n: usize, arity: usize, mut f: impl FnMut(&[usize]) -> usize) -> Self {
        let index = ProductIndex::new(vec![n; arity]);
        let size = index.size().expect("table size overflows usize");
        let cells = (0..size).map(|i| f(&index.decode(i))).collect();
        OpTable { arity, cells }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    /// Value at `args`; `n` is the carrier size.
    pub fn apply(&self, n: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        let idx = args.iter().fold(0, |acc, &x| acc * n + x);
        self.cells[idx]
    }
}

/// A finite metric algebra `(A, d, (σ^A))`.
///
/// Built unchecked by [`MetricAlgebra::from_parts_unchecked`] so invalid
/// candidates can be inspected with [`MetricAlgebra::validate`];
/// [`MetricAlgebra::new`] validates.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricAlgebra<T> {
    sig: Signature,
    names: Vec<String>,
    dist: DistMatrix<T>,
    ops: Vec<OpTable>,
}

impl<T: Scalar> MetricAlgebra<T> {
    pub fn new(
        sig: Signature,
        names: Vec<String>,
        dist: DistMatrix<T>,
        ops: Vec<OpTable>,
    ) -> Result<Self, AlgebraError> {
        let a = MetricAlgebra::from_parts_unchecked(sig, names, dist, ops);
        let defects = a.validate();
        if defects.is_empty() {
            Ok(a)
        } else {
            Err(AlgebraError::Invalid(defects))
        }
    }

    pub fn from_parts_unchecked(
        sig: Signature,
        names: Vec<String>,
        dist: DistMatrix<T>,
        ops: Vec<OpTable>,
    ) -> Self {
        MetricAlgebra { sig, names, dist, ops }
    }

    /// Builds an algebra with default names `0..n` from closures.
    pub fn from_fns(
        sig: Signature,
        n: usize,
        mut dist: impl FnMut(usize, usize) -> ExtDistance<T>,
        mut op: impl FnMut(&str, &[usize]) -> usize,
    ) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::Invalid(vec![Defect::EmptyCarrier]));
        }
        let ops = sig
            .symbols()
            .iter()
            .map(|s| OpTable::from_fn(n, s.arity, |args| op(&s.name, args)))
            .collect();
        let names = (0..n).map(|i| i.to_string()).collect();
        MetricAlgebra::new(sig, names, DistMatrix::from_fn(n, &mut dist), ops)
    }

    /// One-point algebra; every operation returns the single element.
    pub fn trivial(sig: Signature) -> Self {
        let ops = sig.symbols().iter().map(|s| OpTable::from_fn(1, s.arity, |_| 0)).collect();
        MetricAlgebra {
            sig,
            names: vec!["*".to_string()],
            dist: DistMatrix::from_fn(1, |_, _| ExtDistance::zero()),
            ops,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn dist(&self) -> &DistMatrix<T> {
        &self.dist
    }

    pub fn d(&self, i: usize, j: usize) -> &ExtDistance<T> {
        self.dist.get(i, j)
    }

    pub fn tables(&self) -> &[OpTable] {
        &self.ops
    }

    pub fn table(&self, symbol: &str) -> Option<&OpTable> {
        self.sig.index_of(symbol).map(|i| &self.ops[i])
    }

    /// Applies the operation with signature index `op`.
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.ops[op].apply(self.len(), args)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.len());
        self.names = names;
        self
    }

    /// All defects; empty means valid.
    pub fn validate(&self) -> Vec<Defect> {
        let mut defects = Vec::new();
        let n = self.names.len();
        if n == 0 {
            defects.push(Defect::EmptyCarrier);
            return defects;
        }
        for (i, name) in self.names.iter().enumerate() {
            if self.names[..i].contains(name) {
                defects.push(Defect::DuplicateName(name.clone()));
            }
        }
        if self.dist.len() != n {
            defects.push(Defect::MetricSize { expected: n, found: self.dist.len() });
        } else if let Err(v) = self.dist.check_axioms() {
            defects.push(Defect::Metric(v));
        }
        if self.ops.len() != self.sig.len() {
            defects.push(Defect::TableCount { expected: self.sig.len(), found: self.ops.len() });
            return defects;
        }
        for (sym, table) in self.sig.symbols().iter().zip(&self.ops) {
            if table.arity != sym.arity {
                defects.push(Defect::TableArity {
                    symbol: sym.name.clone(),
                    expected: sym.arity,
                    found: table.arity,
                });
                continue;
            }
            let index = ProductIndex::new(vec![n; sym.arity]);
            let expected = index.size().unwrap_or(usize::MAX);
            if table.cells.len() != expected {
                defects.push(Defect::TableSize {
                    symbol: sym.name.clone(),
                    expected,
                    found: table.cells.len(),
                });
                continue;
            }
            for (i, &value) in table.cells.iter().enumerate() {
                if value >= n {
                    defects.push(Defect::TableRange {
                        symbol: sym.name.clone(),
                        args: index.decode(i),
                        value,
                    });
                }
            }
        }
        defects
    }

    /// Checks that every operation is non-expansive for the sup metric on
    /// argument tuples. Returns the first violating `(σ, x̄, ȳ)` in symbol
    /// order, then lexicographic tuple order.
    pub fn is_quantitative(&self) -> Result<(), QuantitativeWitness<T>> {
        let n = self.len();
        for (op, sym) in self.sig.symbols().iter().enumerate() {
            if sym.arity == 0 {
                continue;
            }
            let index = ProductIndex::new(vec![n; sym.arity]);
            let size = index.size().expect("table size overflows usize");
            let tuples: Vec<Vec<usize>> = (0..size).map(|i| index.decode(i)).collect();
            for (i, xs) in tuples.iter().enumerate() {
                let fx = self.ops[op].cells[i];
                for (j, ys) in tuples.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let fy = self.ops[op].cells[j];
                    let output = self.d(fx, fy);
                    if output.is_zero() {
                        continue;
                    }
                    let input = xs
                        .iter()
                        .zip(ys)
                        .fold(ExtDistance::zero(), |acc, (&x, &y)| acc.max(self.d(x, y).clone()));
                    if *output > input {
                        return Err(QuantitativeWitness {
                            symbol: sym.name.clone(),
                            left: xs.clone(),
                            right: ys.clone(),
                            input,
                            output: output.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// A pair of argument tuples on which an operation expands distance.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantitativeWitness<T> {
    pub symbol: String,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// Sup distance between the argument tuples.
    pub input: ExtDistance<T>,
    /// Distance between the results.
    pub output: ExtDistance<T>,
}

impl<T: Scalar> fmt::Display for QuantitativeWitness<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{:?} vs {}{:?}: results at distance {} > argument distance {}",
            self.symbol, self.left, self.symbol, self.right, self.output, self.input
        )
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::Rational;

    pub fn q(n: i64, d: i64) -> ExtDistance<Rational> {
        ExtDistance::Finite(Rational::new(n.into(), d.into()))
    }

    pub fn unit(i: usize, j: usize) -> ExtDistance<Rational> {
        if i == j {
            q(0, 1)
        } else {
            q(1, 1)
        }
    }

    /// `({0,1}, xor)` with `d(0,1) = dist`.
    pub fn xor2(dist: ExtDistance<Rational>) -> MetricAlgebra<Rational> {
        let sig = Signature::new([("xor", 2)]).unwrap();
        MetricAlgebra::from_fns(
            sig,
            2,
            |i, j| if i == j { q(0, 1) } else { dist.clone() },
            |_, a| a[0] ^ a[1],
        )
        .unwrap()
    }

    /// Cyclic group of order `n` with `add/2`, `zero/0` and the given metric.
    pub fn cyclic(
        n: usize,
        dist: impl FnMut(usize, usize) -> ExtDistance<Rational>,
    ) -> MetricAlgebra<Rational> {
        let sig = Signature::new([("add", 2), ("zero", 0)]).unwrap();
        MetricAlgebra::from_fns(sig, n, dist, |s, a| if s == "add" { (a[0] + a[1]) % n } else { 0 })
            .unwrap()
    }

    /// `({0,1}, u = negation)` with `d(0,1) = 1`.
    pub fn negation() -> MetricAlgebra<Rational> {
        let sig = Signature::new([("u", 1)]).unwrap();
        MetricAlgebra::from_fns(sig, 2, unit, |_, a| 1 - a[0]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::Rational;

    #[test]
    fn valid_xor() {
        assert!(xor2(q(1, 1)).validate().is_empty());
    }

    #[test]
    fn zero_distance_defect() {
        let good = xor2(q(1, 1));
        let dist = DistMatrix::from_fn(2, |_, _| q(0, 1));
        let bad = MetricAlgebra::from_parts_unchecked(
            good.signature().clone(),
            good.names().to_vec(),
            dist,
            good.tables().to_vec(),
        );
        assert_eq!(bad.validate(), vec![Defect::Metric(Violation::Indiscernible(0, 1))]);
    }

    #[test]
    fn table_range_defect() {
        let good = xor2(q(1, 1));
        let bad = MetricAlgebra::from_parts_unchecked(
            good.signature().clone(),
            good.names().to_vec(),
            good.dist().clone(),
            vec![OpTable::new(2, vec![0, 1, 1, 2])],
        );
        assert_eq!(
            bad.validate(),
            vec![Defect::TableRange { symbol: "xor".into(), args: vec![1, 1], value: 2 }]
        );
        let short = MetricAlgebra::from_parts_unchecked(
            good.signature().clone(),
            good.names().to_vec(),
            good.dist().clone(),
            vec![OpTable::new(2, vec![0, 1, 1])],
        );
        assert!(matches!(short.validate()[0], Defect::TableSize { expected: 4, found: 3, .. }));
    }

    #[test]
    fn quantitative_checks() {
        let empty: MetricAlgebra<Rational> =
            MetricAlgebra::from_fns(Signature::empty(), 3, unit, |_, _| 0).unwrap();
        assert!(empty.is_quantitative().is_ok());
        assert!(xor2(q(1, 1)).is_quantitative().is_ok());

        // f(0)=0, f(1)=2, f(2)=2; d(0,1)=1, d(0,2)=2, d(1,2)=1
        let sig = Signature::new([("f", 1)]).unwrap();
        let line = |i: usize, j: usize| q((i as i64 - j as i64).abs(), 1);
        let a = MetricAlgebra::from_fns(sig, 3, line, |_, x| [0, 2, 2][x[0]]).unwrap();
        let w = a.is_quantitative().unwrap_err();
        assert_eq!((w.symbol.as_str(), w.left.clone(), w.right.clone()), ("f", vec![0], vec![1]));
        assert_eq!((w.input, w.output), (q(1, 1), q(2, 1)));
    }

    #[test]
    fn trivial_algebra() {
        let sig = Signature::new([("xor", 2), ("zero", 0)]).unwrap();
        let t = MetricAlgebra::<Rational>::trivial(sig);
        assert!(t.validate().is_empty());
        assert!(t.is_quantitative().is_ok());
    }
}
