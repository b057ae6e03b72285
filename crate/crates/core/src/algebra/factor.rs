//! Factoring one quotient map through another.

use thiserror::Error;

use crate::metric::ExtDistance;
use crate::scalar::Scalar;

use super::hom::{check_homomorphism, same_algebra};
use super::Homomorphism;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorError<T: Scalar> {
    #[error("the two maps have different sources")]
    DifferentSources,
    #[error("the {0} map is not surjective")]
    NotSurjective(&'static str),
    #[error("the {0} map is not non-expansive")]
    NotMHomomorphism(&'static str),
    #[error("kernel condition fails: p({a}) = p({b}) but q({a}) != q({b})")]
    Kernel { a: usize, b: usize },
    #[error(
        "metric condition fails at ({a}, {b}): d(q a, q b) = {q_dist} > d(p a, p b) = {p_dist}"
    )]
    Metric { a: usize, b: usize, p_dist: ExtDistance<T>, q_dist: ExtDistance<T> },
}

fn preconditions<T: Scalar>(
    p: &Homomorphism<T>,
    q: &Homomorphism<T>,
) -> Result<(), FactorError<T>> {
    if !same_algebra(p.source(), q.source()) {
        return Err(FactorError::DifferentSources);
    }
    if !p.is_surjective() {
        return Err(FactorError::NotSurjective("first"));
    }
    if !q.is_surjective() {
        return Err(FactorError::NotSurjective("second"));
    }
    Ok(())
}

/// `h(u) = q(a)` for the least `a` with `p(a) = u`.
fn build<T: Scalar>(p: &Homomorphism<T>, q: &Homomorphism<T>) -> Homomorphism<T> {
    let mut h = vec![usize::MAX; p.target().len()];
    for (a, &u) in p.map().iter().enumerate() {
        if h[u] == usize::MAX {
            h[u] = q.apply(a);
        }
    }
    let h = check_homomorphism(h, p.target().clone(), q.target().clone())
        .expect("factor of a homomorphism through a surjection is a homomorphism");
    debug_assert!(h.is_surjective());
    h
}

/// The unique homomorphism `h` with `h ∘ p = q`, given that `p(a) = p(b)`
/// implies `q(a) = q(b)`.
pub fn factor_homomorphism<T: Scalar>(
    p: &Homomorphism<T>,
    q: &Homomorphism<T>,
) -> Result<Homomorphism<T>, FactorError<T>> {
    preconditions(p, q)?;
    let n = p.source().len();
    for a in 0..n {
        for b in a + 1..n {
            if p.apply(a) == p.apply(b) && q.apply(a) != q.apply(b) {
                return Err(FactorError::Kernel { a, b });
            }
        }
    }
    Ok(build(p, q))
}

/// The unique non-expansive homomorphism `h` with `h ∘ p = q`, given that
/// `d(q a, q b) ≤ d(p a, p b)` for all `a, b`.
pub fn factor_m_homomorphism<T: Scalar>(
    p: &Homomorphism<T>,
    q: &Homomorphism<T>,
) -> Result<Homomorphism<T>, FactorError<T>> {
    preconditions(p, q)?;
    if !p.is_non_expansive() {
        return Err(FactorError::NotMHomomorphism("first"));
    }
    if !q.is_non_expansive() {
        return Err(FactorError::NotMHomomorphism("second"));
    }
    let n = p.source().len();
    for a in 0..n {
        for b in a + 1..n {
            let p_dist = p.target().d(p.apply(a), p.apply(b));
            let q_dist = q.target().d(q.apply(a), q.apply(b));
            if q_dist > p_dist {
                return Err(FactorError::Metric {
                    a,
                    b,
                    p_dist: p_dist.clone(),
                    q_dist: q_dist.clone(),
                });
            }
        }
    }
    let h = build(p, q);
    debug_assert!(h.is_non_expansive());
    Ok(h)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::fixtures::*;
    use super::super::{check_homomorphism, scale_metric};
    use super::*;
    use crate::Rational;

    #[test]
    fn identity_factorization() {
        let z4 = Arc::new(cyclic(4, unit));
        let id = check_homomorphism((0..4).collect(), z4.clone(), z4.clone()).unwrap();
        let h = factor_homomorphism(&id, &id).unwrap();
        assert_eq!(h.map(), &[0, 1, 2, 3]);
        assert_eq!(factor_m_homomorphism(&id, &id).unwrap().map(), &[0, 1, 2, 3]);
    }

    #[test]
    fn through_mod_two() {
        let z4 = Arc::new(cyclic(4, unit));
        let z2 = Arc::new(cyclic(2, unit));
        let id = check_homomorphism((0..4).collect(), z4.clone(), z4.clone()).unwrap();
        let m2 = check_homomorphism(vec![0, 1, 0, 1], z4.clone(), z2).unwrap();
        let h = factor_homomorphism(&id, &m2).unwrap();
        assert_eq!(h.map(), &[0, 1, 0, 1]);
        for a in 0..4 {
            assert_eq!(h.apply(id.apply(a)), m2.apply(a));
        }
        assert_eq!(factor_homomorphism(&m2, &id).unwrap_err(), FactorError::Kernel { a: 0, b: 2 });
    }

    #[test]
    fn metric_condition() {
        let z4 = Arc::new(cyclic(4, unit));
        let half = Rational::new(1.into(), 2.into());
        let (halved, to_half) = scale_metric(&z4, &half).unwrap();
        let id = check_homomorphism((0..4).collect(), z4.clone(), z4.clone()).unwrap();
        let h = factor_m_homomorphism(&id, &to_half).unwrap();
        assert_eq!(h.map(), &[0, 1, 2, 3]);
        assert!(h.is_non_expansive());
        assert!(Arc::ptr_eq(h.target(), &halved));
        match factor_m_homomorphism(&to_half, &id).unwrap_err() {
            FactorError::Metric { a, b, p_dist, q_dist } => {
                assert_eq!((a, b), (0, 1));
                assert_eq!((p_dist, q_dist), (q(1, 2), q(1, 1)));
            }
            e => panic!("unexpected {e}"),
        }
        // the plain factorization exists regardless of distances
        assert!(factor_homomorphism(&to_half, &id).is_ok());
    }

    #[test]
    fn preconditions_are_checked() {
        let z4 = Arc::new(cyclic(4, unit));
        let z2 = Arc::new(cyclic(2, unit));
        let id4 = check_homomorphism((0..4).collect(), z4.clone(), z4.clone()).unwrap();
        let id2 = check_homomorphism(vec![0, 1], z2.clone(), z2.clone()).unwrap();
        assert_eq!(factor_homomorphism(&id4, &id2).unwrap_err(), FactorError::DifferentSources);
        let zero = check_homomorphism(vec![0, 0, 0, 0], z4.clone(), z4.clone()).unwrap();
        assert_eq!(
            factor_homomorphism(&zero, &id4).unwrap_err(),
            FactorError::NotSurjective("first")
        );
    }
}
