use std::sync::Arc;

use crate::metric::{quotient_metric, sup_product, ProductIndex};
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::term::Signature;

use super::congruence::is_congruence;
use super::hom::check_homomorphism;
use super::{AlgebraError, Homomorphism, MetricAlgebra, OpTable};

/// An M-product with its projections.
#[derive(Clone, Debug)]
pub struct MProduct<T> {
    pub algebra: Arc<MetricAlgebra<T>>,
    pub projections: Vec<Homomorphism<T>>,
    /// Coordinates of each product element, one index per factor.
    pub tuples: Vec<Vec<usize>>,
}

/// An M-subalgebra with its isometric embedding.
#[derive(Clone, Debug)]
pub struct Subalgebra<T> {
    pub algebra: Arc<MetricAlgebra<T>>,
    pub embedding: Homomorphism<T>,
}

/// A canonical M-quotient with its projection.
#[derive(Clone, Debug)]
pub struct MQuotient<T> {
    pub algebra: Arc<MetricAlgebra<T>>,
    pub projection: Homomorphism<T>,
    pub partition: Partition,
    /// For a quantitative source: whether the quotient is quantitative too
    /// (a Q-quotient). `None` when the source is not quantitative.
    pub q_quotient: Option<bool>,
}

fn check_cells(sig: &Signature, n: usize, limit: usize) -> Result<(), AlgebraError> {
    let mut cells = n.checked_mul(n);
    for s in sig.symbols() {
        cells = cells.and_then(|c| n.checked_pow(s.arity as u32).and_then(|t| c.checked_add(t)));
    }
    match cells {
        Some(c) if c <= limit => Ok(()),
        other => Err(AlgebraError::TooLarge {
            what: "table and distance cells",
            size: other.map_or_else(|| "overflow".to_string(), |c| c.to_string()),
            limit,
        }),
    }
}

/// Sup-metric product with pointwise operations. The empty product is the
/// one-point algebra over `sig`.
pub fn m_product<T: Scalar>(
    sig: &Signature,
    factors: &[Arc<MetricAlgebra<T>>],
    max_carrier: usize,
    max_cells: usize,
) -> Result<MProduct<T>, AlgebraError> {
    if factors.iter().any(|f| f.signature() != sig) {
        return Err(AlgebraError::SignatureMismatch);
    }
    let index = ProductIndex::new(factors.iter().map(|f| f.len()).collect());
    let size =
        index.size().filter(|&s| s <= max_carrier).ok_or_else(|| AlgebraError::TooLarge {
            what: "product carrier",
            size: factors.iter().map(|f| f.len().to_string()).collect::<Vec<_>>().join("x"),
            limit: max_carrier,
        })?;
    check_cells(sig, size, max_cells)?;
    let tuples: Vec<Vec<usize>> = (0..size).map(|i| index.decode(i)).collect();
    let dist = sup_product(&factors.iter().map(|f| f.dist().clone()).collect::<Vec<_>>());
    let ops = sig
        .symbols()
        .iter()
        .enumerate()
        .map(|(op, s)| {
            OpTable::from_fn(size, s.arity, |args| {
                let coords: Vec<usize> = factors
                    .iter()
                    .enumerate()
                    .map(|(f, alg)| {
                        let column: Vec<usize> = args.iter().map(|&a| tuples[a][f]).collect();
                        alg.apply(op, &column)
                    })
                    .collect();
                index.encode(&coords)
            })
        })
        .collect();
    let names = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().zip(factors).map(|(&x, f)| f.name(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let algebra = if factors.is_empty() {
        Arc::new(MetricAlgebra::trivial(sig.clone()))
    } else {
        Arc::new(MetricAlgebra::from_parts_unchecked(sig.clone(), names, dist, ops))
    };
    let projections = factors
        .iter()
        .enumerate()
        .map(|(f, alg)| {
            let map = tuples.iter().map(|t| t[f]).collect();
            check_homomorphism(map, algebra.clone(), alg.clone())
                .expect("product projection is a homomorphism")
        })
        .collect();
    Ok(MProduct { algebra, projections, tuples })
}

/// Least subset containing `gens` (and all constants) closed under the
/// operations, with the induced metric. Elements keep their original order.
pub fn generated_subalgebra<T: Scalar>(
    a: &Arc<MetricAlgebra<T>>,
    gens: &[usize],
) -> Result<Subalgebra<T>, AlgebraError> {
    let n = a.len();
    if let Some(&g) = gens.iter().find(|&&g| g >= n) {
        return Err(AlgebraError::OutOfRange(g));
    }
    let mut member = vec![false; n];
    let mut elements: Vec<usize> = Vec::new();
    let add = |x: usize, member: &mut Vec<bool>, elements: &mut Vec<usize>| {
        if !member[x] {
            member[x] = true;
            elements.push(x);
        }
    };
    for &g in gens {
        add(g, &mut member, &mut elements);
    }
    let sig = a.signature();
    for (op, s) in sig.symbols().iter().enumerate() {
        if s.arity == 0 {
            add(a.apply(op, &[]), &mut member, &mut elements);
        }
    }
    if elements.is_empty() {
        return Err(AlgebraError::EmptyClosure);
    }
    // Semi-naive closure: each round only tuples touching the new frontier.
    let mut done = 0;
    while done < elements.len() {
        let old = done;
        let current = elements.len();
        done = current;
        for (op, s) in sig.symbols().iter().enumerate() {
            if s.arity == 0 {
                continue;
            }
            let index = ProductIndex::new(vec![current; s.arity]);
            let size = index.size().expect("closure size overflows usize");
            for i in 0..size {
                let digits = index.decode(i);
                if digits.iter().all(|&d| d < old) {
                    continue;
                }
                let args: Vec<usize> = digits.iter().map(|&d| elements[d]).collect();
                add(a.apply(op, &args), &mut member, &mut elements);
            }
        }
    }
    let mut carrier = elements;
    carrier.sort_unstable();
    let mut position = vec![usize::MAX; n];
    for (i, &x) in carrier.iter().enumerate() {
        position[x] = i;
    }
    let ops = sig
        .symbols()
        .iter()
        .enumerate()
        .map(|(op, s)| {
            OpTable::from_fn(carrier.len(), s.arity, |args| {
                let lifted: Vec<usize> = args.iter().map(|&x| carrier[x]).collect();
                position[a.apply(op, &lifted)]
            })
        })
        .collect();
    let names = carrier.iter().map(|&x| a.name(x).to_string()).collect();
    let sub = Arc::new(MetricAlgebra::from_parts_unchecked(
        sig.clone(),
        names,
        a.dist().restrict(&carrier),
        ops,
    ));
    let embedding = check_homomorphism(carrier, sub.clone(), a.clone())
        .expect("inclusion of a closed subset is a homomorphism");
    debug_assert!(embedding.is_isometric());
    Ok(Subalgebra { algebra: sub, embedding })
}

/// Quotient by a congruence with the canonical (greatest) quotient metric.
pub fn m_quotient<T: Scalar>(
    a: &Arc<MetricAlgebra<T>>,
    p: &Partition,
) -> Result<MQuotient<T>, AlgebraError> {
    if p.carrier_len() != a.len() {
        return Err(AlgebraError::PartitionSize { expected: a.len(), found: p.carrier_len() });
    }
    is_congruence(a, p).map_err(AlgebraError::NotCongruence)?;
    let blocks = p.blocks();
    let ops = a
        .signature()
        .symbols()
        .iter()
        .enumerate()
        .map(|(op, s)| {
            OpTable::from_fn(blocks.len(), s.arity, |args| {
                let reps: Vec<usize> = args.iter().map(|&b| blocks[b][0]).collect();
                p.block_of(a.apply(op, &reps))
            })
        })
        .collect();
    let names = blocks
        .iter()
        .map(|b| {
            let parts: Vec<&str> = b.iter().map(|&x| a.name(x)).collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    let quotient = Arc::new(MetricAlgebra::from_parts_unchecked(
        a.signature().clone(),
        names,
        quotient_metric(a.dist(), p),
        ops,
    ));
    let projection = check_homomorphism(p.labels().to_vec(), a.clone(), quotient.clone())
        .expect("projection onto a congruence quotient is a homomorphism");
    debug_assert!(projection.is_surjective() && projection.is_non_expansive());
    let q_quotient = a.is_quantitative().is_ok().then(|| quotient.is_quantitative().is_ok());
    Ok(MQuotient { algebra: quotient, projection, partition: p.clone(), q_quotient })
}

/// Same algebra with every distance multiplied by `factor ∈ (0, 1]`; the
/// identity onto it is a surjective M-homomorphism.
pub fn scale_metric<T: Scalar>(
    a: &Arc<MetricAlgebra<T>>,
    factor: &T,
) -> Result<(Arc<MetricAlgebra<T>>, Homomorphism<T>), AlgebraError> {
    if *factor <= T::zero() || *factor > T::one() {
        return Err(AlgebraError::BadScale(factor.to_string()));
    }
    let scaled = Arc::new(MetricAlgebra::from_parts_unchecked(
        a.signature().clone(),
        a.names().to_vec(),
        a.dist().scaled(factor),
        a.tables().to_vec(),
    ));
    let id = check_homomorphism((0..a.len()).collect(), a.clone(), scaled.clone())
        .expect("identity is a homomorphism");
    Ok((scaled, id))
}
