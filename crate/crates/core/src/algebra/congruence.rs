use std::fmt;

use crate::metric::ProductIndex;
use crate::partition::{set_partitions, Partition};
use crate::scalar::Scalar;

use super::{AlgebraError, MetricAlgebra};

/// Two argument tuples, blockwise equal, whose results land in different blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceFailure {
    pub symbol: String,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl fmt::Display for CongruenceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "`{}` separates {:?} and {:?}, whose arguments are related",
            self.symbol, self.left, self.right
        )
    }
}

/// Checks compatibility one argument position at a time, which suffices by
/// transitivity of the block relation.
pub fn is_congruence<T: Scalar>(
    a: &MetricAlgebra<T>,
    p: &Partition,
) -> Result<(), CongruenceFailure> {
    let n = a.len();
    assert_eq!(p.carrier_len(), n, "partition does not match the carrier");
    for (op, sym) in a.signature().symbols().iter().enumerate() {
        let index = ProductIndex::new(vec![n; sym.arity]);
        let size = index.size().expect("table size overflows usize");
        for i in 0..size {
            let args = index.decode(i);
            let out = a.apply(op, &args);
            for pos in 0..sym.arity {
                for &other in &p.blocks()[p.block_of(args[pos])] {
                    if other == args[pos] {
                        continue;
                    }
                    let mut moved = args.clone();
                    moved[pos] = other;
                    if !p.same_block(out, a.apply(op, &moved)) {
                        return Err(CongruenceFailure {
                            symbol: sym.name.clone(),
                            left: args,
                            right: moved,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Every congruence of `a`, in restricted-growth-string order (the singleton
/// partition first, the one-block partition last).
pub fn enumerate_congruences<T: Scalar>(
    a: &MetricAlgebra<T>,
    max_carrier: usize,
) -> Result<Vec<Partition>, AlgebraError> {
    if a.len() > max_carrier {
        return Err(AlgebraError::TooLarge {
            what: "congruence enumeration carrier",
            size: a.len().to_string(),
            limit: max_carrier,
        });
    }
    let mut all: Vec<Partition> =
        set_partitions(a.len()).filter(|p| is_congruence(a, p).is_ok()).collect();
    // restricted growth order lists the one-block partition first
    all.reverse();
    Ok(all)
}
