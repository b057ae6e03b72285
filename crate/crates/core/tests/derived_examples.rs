//! Worked examples. Each expected value is first computed by a small
//! brute-force oracle, then frozen as a literal; the library is checked
//! against the literal.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use metalg::algebra::{
    check_homomorphism, enumerate_congruences, factor_homomorphism, factor_m_homomorphism,
    generated_subalgebra, m_product, m_quotient, scale_metric, FactorError, HomDefect,
};
use metalg::free::{equational_theory, free_algebra, membership_bounded, non_variety_demo};
use metalg::metric::{quotient_metric, sup_product, Violation};
use metalg::partition::set_partitions;
use metalg::semantics::{eval_term, parse_equations, satisfies, satisfies_all};
use metalg::term::parse_term;
use metalg::{
    ClassK, DistMatrix, ExactDistance, ExactEquation, Limits, Membership, Partition, Satisfaction,
    Valuation,
};

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn matrix(rows: Vec<Vec<ExactDistance>>) -> DistMatrix<metalg::Rational> {
    DistMatrix::from_rows(rows).unwrap()
}

#[test]
fn triangle_witness() {
    let d = vec![
        vec![q(0, 1), q(1, 1), q(3, 1)],
        vec![q(1, 1), q(0, 1), q(1, 1)],
        vec![q(3, 1), q(1, 1), q(0, 1)],
    ];
    let oracle = (0..3)
        .flat_map(|i| (0..3).flat_map(move |j| (0..3).map(move |k| (i, j, k))))
        .find(|&(i, j, k)| d[i][j] > &d[i][k] + &d[k][j]);
    assert_eq!(oracle, Some((0, 2, 1)));
    assert_eq!(matrix(d).check_axioms(), Err(Violation::Triangle(0, 2, 1)));
}

#[test]
fn sup_product_pair() {
    let a = uniform(2, q(1, 1));
    let b = uniform(2, q(1, 2));
    let oracle = a[0][1].clone().max(b[0][1].clone());
    assert_eq!(oracle, q(1, 1));
    let p = sup_product(&[matrix(a), matrix(b)]);
    // (0,0) is index 0 and (1,1) is index 3
    assert_eq!(*p.get(0, 3), q(1, 1));
}

#[test]
fn line_quotient() {
    let d = line_metric(4);
    let blocks = [vec![0, 1], vec![2, 3]];
    let mut w = vec![vec![q(0, 1); 2]; 2];
    for (x, bx) in blocks.iter().enumerate() {
        for (y, by) in blocks.iter().enumerate() {
            if x != y {
                w[x][y] = bx
                    .iter()
                    .flat_map(|&i| by.iter().map(move |&j| (i, j)))
                    .map(|(i, j)| d[i][j].clone())
                    .fold(inf(), ExactDistance::min);
            }
        }
    }
    let oracle = oracle_closure(&w);
    assert_eq!(oracle[0][1], q(1, 1));
    let p = Partition::from_blocks(4, blocks.to_vec()).unwrap();
    assert_eq!(*quotient_metric(&matrix(d), &p).get(0, 1), q(1, 1));
}

#[test]
fn xor_is_valid_and_quantitative() {
    let a = xor(q(1, 1));
    let axioms_hold = (0..2).all(|i| {
        (0..2).all(|j| {
            (a.d(i, j).is_zero() == (i == j))
                && a.d(i, j) == a.d(j, i)
                && (0..2).all(|k| *a.d(i, j) <= a.d(i, k) + a.d(k, j))
        })
    });
    assert!(axioms_hold);
    assert!(a.validate().is_empty());
    let mut oracle_quantitative = true;
    for x in 0..4usize {
        for y in 0..4usize {
            let (x0, x1, y0, y1) = (x >> 1, x & 1, y >> 1, y & 1);
            let input = a.d(x0, y0).clone().max(a.d(x1, y1).clone());
            if *a.d(x0 ^ x1, y0 ^ y1) > input {
                oracle_quantitative = false;
            }
        }
    }
    assert!(oracle_quantitative);
    assert!(a.is_quantitative().is_ok());
}

#[test]
fn expanding_unary_witness() {
    let d = vec![
        vec![q(0, 1), q(1, 1), q(2, 1)],
        vec![q(1, 1), q(0, 1), q(1, 1)],
        vec![q(2, 1), q(1, 1), q(0, 1)],
    ];
    let f = [0, 2, 2];
    let oracle = (0..3)
        .flat_map(|x| (0..3).map(move |y| (x, y)))
        .find(|&(x, y)| x != y && d[f[x]][f[y]] > d[x][y]);
    assert_eq!(oracle, Some((0, 1)));
    let a = algebra(sig(&[("f", 1)]), d, |_, a| f[a[0]]);
    let w = a.is_quantitative().unwrap_err();
    assert_eq!((w.symbol.as_str(), w.left, w.right), ("f", vec![0], vec![1]));
    assert_eq!((w.input, w.output), (q(1, 1), q(2, 1)));
}

#[test]
fn homomorphism_examples() {
    let z4 = cyclic(4, uniform(4, q(1, 1)));
    let z2 = xor(q(1, 1));
    let mod2 = |x: usize| x % 2;
    let oracle = (0..4).all(|a| (0..4).all(|b| mod2((a + b) % 4) == mod2(a) ^ mod2(b)));
    assert!(oracle);
    // xor has no constant; use Z2 with addition for the signature match
    let z2c = cyclic(2, uniform(2, q(1, 1)));
    let h = check_homomorphism(vec![0, 1, 0, 1], z4, z2c).unwrap();
    assert!(h.is_surjective());

    let swap = |x: usize| 1 - x;
    let oracle = (0..2)
        .flat_map(|a| (0..2).map(move |b| vec![a, b]))
        .find(|v| swap(v[0] ^ v[1]) != swap(v[0]) ^ swap(v[1]));
    assert_eq!(oracle, Some(vec![0, 0]));
    assert_eq!(
        check_homomorphism(vec![1, 0], z2.clone(), z2).unwrap_err(),
        HomDefect::NotPreserved { symbol: "xor".into(), args: vec![0, 0] }
    );
}

#[test]
fn product_example() {
    let (a, b) = (Arc::new(xor(q(1, 1))), Arc::new(xor(q(1, 2))));
    let p = m_product(a.signature(), &[a.clone(), b.clone()], 100, 1000).unwrap();
    assert_eq!(p.algebra.len(), 4);
    let oracle = a.d(0, 1).clone().max(b.d(0, 1).clone());
    assert_eq!(oracle, q(1, 1));
    let (x, y) = (
        p.tuples.iter().position(|t| t == &[0, 0]).unwrap(),
        p.tuples.iter().position(|t| t == &[1, 1]).unwrap(),
    );
    assert_eq!(*p.algebra.d(x, y), q(1, 1));
}

#[test]
fn subalgebra_examples() {
    let z4 = Arc::new(cyclic(4, uniform(4, q(1, 1))));
    let mut closed = BTreeSet::from([2usize, 0]);
    loop {
        let more: BTreeSet<usize> =
            closed.iter().flat_map(|&a| closed.iter().map(move |&b| (a + b) % 4)).collect();
        if more.is_subset(&closed) {
            break;
        }
        closed.extend(more);
    }
    assert_eq!(closed, BTreeSet::from([0, 2]));
    assert_eq!(generated_subalgebra(&z4, &[2]).unwrap().embedding.map(), &[0, 2]);
    let x = Arc::new(xor(q(1, 1)));
    assert_eq!(generated_subalgebra(&x, &[0]).unwrap().embedding.map(), &[0]);
}

#[test]
fn congruence_counts() {
    let compatible = |n: usize, op: &dyn Fn(usize, usize) -> usize, p: &Partition| {
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    (0..n).all(|d| {
                        !(p.same_block(a, c) && p.same_block(b, d))
                            || p.same_block(op(a, b), op(c, d))
                    })
                })
            })
        })
    };
    let z4_oracle: Vec<String> = set_partitions(4)
        .filter(|p| compatible(4, &|a, b| (a + b) % 4, p))
        .map(|p| p.to_string())
        .collect();
    assert_eq!(z4_oracle.len(), 3);
    let z4 = cyclic(4, uniform(4, q(1, 1)));
    let got: Vec<String> =
        enumerate_congruences(&z4, 6).unwrap().iter().map(|p| p.to_string()).collect();
    assert_eq!(got, vec!["0|1|2|3", "0 2|1 3", "0 1 2 3"]);
    let xor_oracle = set_partitions(2).filter(|p| compatible(2, &|a, b| a ^ b, p)).count();
    assert_eq!(xor_oracle, 2);
    assert_eq!(enumerate_congruences(&xor(q(1, 1)), 6).unwrap().len(), 2);
}

#[test]
fn z4_unit_quotient() {
    let z4 = Arc::new(cyclic(4, uniform(4, q(1, 1))));
    let p = Partition::from_blocks(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
    let cross = [(0, 1), (0, 3), (2, 1), (2, 3)]
        .iter()
        .map(|&(i, j)| z4.d(i, j).clone())
        .fold(inf(), ExactDistance::min);
    assert_eq!(cross, q(1, 1));
    let m = m_quotient(&z4, &p).unwrap();
    assert_eq!(m.algebra.len(), 2);
    assert_eq!(*m.algebra.d(0, 1), q(1, 1));
}

#[test]
fn factor_examples() {
    let z4 = Arc::new(cyclic(4, uniform(4, q(1, 1))));
    let z2 = Arc::new(cyclic(2, uniform(2, q(1, 1))));
    let id = check_homomorphism((0..4).collect(), z4.clone(), z4.clone()).unwrap();
    let m2 = check_homomorphism(vec![0, 1, 0, 1], z4.clone(), z2).unwrap();
    // oracle: h(p(a)) := q(a), well defined because p is the identity
    let oracle: Vec<usize> = (0..4).map(|a| a % 2).collect();
    assert_eq!(oracle, vec![0, 1, 0, 1]);
    assert_eq!(factor_homomorphism(&id, &m2).unwrap().map(), oracle.as_slice());
    let witness = (0..4usize)
        .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
        .find(|&(a, b)| a % 2 == b % 2 && a != b);
    assert_eq!(witness, Some((0, 2)));
    assert_eq!(factor_homomorphism(&m2, &id).unwrap_err(), FactorError::Kernel { a: 0, b: 2 });

    let (_, halve) = scale_metric(&z4, &r(1, 2)).unwrap();
    let h = factor_m_homomorphism(&id, &halve).unwrap();
    assert_eq!(h.map(), &[0, 1, 2, 3]);
    assert!(h.is_non_expansive());
    assert!(matches!(
        factor_m_homomorphism(&halve, &id).unwrap_err(),
        FactorError::Metric { p_dist, q_dist, .. } if p_dist == q(1, 2) && q_dist == q(1, 1)
    ));
}

#[test]
fn scale_example() {
    let a = Arc::new(xor(q(1, 1)));
    let (s, id) = scale_metric(&a, &r(1, 2)).unwrap();
    assert_eq!(*s.d(0, 1), q(1, 2));
    assert!(id.is_surjective() && id.is_m_homomorphism());
}

#[test]
fn evaluation_and_satisfaction_examples() {
    let a = xor(q(1, 1));
    let xs = set(&["x", "y"]);
    let t = parse_term(a.signature(), &xs, "xor(x, xor(x,y))").unwrap();
    let env = [("x".to_string(), 1), ("y".to_string(), 0)].into_iter().collect();
    assert_eq!(oracle_eval(&a, &env, &t), 0);
    assert_eq!(eval_term(&a, &Valuation::from([("x", 1), ("y", 0)]), &t).unwrap(), 0);

    let comm: Vec<ExactEquation> =
        parse_equations(a.signature(), "vars x, y; eq xor(x,y) =0 xor(y,x);").unwrap();
    let oracle = oracle_max_distance(&a, &names(&["x", "y"]), comm[0].lhs(), comm[0].rhs());
    assert_eq!(oracle, q(0, 1));
    assert!(satisfies(&a, &comm[0], 100).unwrap().holds());

    let nil: Vec<ExactEquation> =
        parse_equations(a.signature(), "vars x; eq x =0 xor(x,x);").unwrap();
    let worst = oracle_envs(&names(&["x"]), 2)
        .into_iter()
        .find(|env| a.d(env["x"], oracle_eval(&a, env, nil[0].rhs())) > &q(0, 1))
        .unwrap();
    assert_eq!(worst["x"], 1);
    assert_eq!(
        satisfies(&a, &nil[0], 100).unwrap(),
        Satisfaction::Fails { valuation: Valuation::from([("x", 1)]), distance: q(1, 1) }
    );

    let far = algebra(sig(&[]), vec![vec![q(0, 1), inf()], vec![inf(), q(0, 1)]], |_, _| 0);
    let e: Vec<ExactEquation> = parse_equations(far.signature(), "vars x, y; eq x =5 y;").unwrap();
    assert_eq!(
        satisfies(&far, &e[0], 100).unwrap(),
        Satisfaction::Fails { valuation: Valuation::from([("x", 0), ("y", 1)]), distance: inf() }
    );

    let theory: Vec<ExactEquation> =
        parse_equations(a.signature(), "vars x, y; eq xor(x,y) =0 xor(y,x); eq x =1 y;").unwrap();
    assert!(satisfies_all(&a, &theory, 100).unwrap().is_none());
    let doubled = xor(q(2, 1));
    assert_eq!(satisfies_all(&doubled, &theory, 100).unwrap().unwrap().index, 1);
}

#[test]
fn free_examples() {
    let limits = Limits::default();
    let neg = ClassK::from_algebras(vec![negation()]).unwrap();
    // oracle: the two valuations x=0, x=1 give tuples (0,1) for x and (1,0) for u(x)
    let member = negation();
    let tuple = |t: &str| -> Vec<usize> {
        let term = parse_term(member.signature(), &set(&["x"]), t).unwrap();
        oracle_envs(&names(&["x"]), 2).iter().map(|env| oracle_eval(&member, env, &term)).collect()
    };
    assert_eq!((tuple("x"), tuple("u(x)"), tuple("u(u(x))")), (vec![0, 1], vec![1, 0], vec![0, 1]));
    let f = free_algebra(&neg, &set(&["x"]), &limits).unwrap();
    assert_eq!(f.len(), 2);
    assert_eq!(f.reps().iter().map(|t| t.to_string()).collect::<Vec<_>>(), ["x", "u(x)"]);
    let p = |s: &str| parse_term(member.signature(), &set(&["x"]), s).unwrap();
    assert_eq!(f.free_distance(&p("x"), &p("u(x)")).unwrap(), q(1, 1));
    assert_eq!(f.free_distance(&p("x"), &p("u(u(x))")).unwrap(), q(0, 1));

    let x1 = xor(q(1, 1));
    let vars = names(&["x", "y"]);
    let depth3: BTreeSet<Vec<usize>> = oracle_terms(x1.signature(), &vars, 3)
        .iter()
        .map(|t| oracle_envs(&vars, 2).iter().map(|env| oracle_eval(&x1, env, t)).collect())
        .collect();
    // depth-4 terms are variables or xor of two depth-3 terms, evaluated pointwise
    let mut depth4: BTreeSet<Vec<usize>> = BTreeSet::from([vec![0, 0, 1, 1], vec![0, 1, 0, 1]]);
    for a in &depth3 {
        for b in &depth3 {
            depth4.insert(a.iter().zip(b).map(|(x, y)| x ^ y).collect());
        }
    }
    assert_eq!(depth4.len(), 4);
    let fx =
        free_algebra(&ClassK::from_algebras(vec![x1.clone()]).unwrap(), &set(&["x", "y"]), &limits)
            .unwrap();
    assert_eq!(fx.len(), 4);
    assert!((0..4)
        .all(|i| (0..4).all(|j| *fx.algebra().d(i, j) == if i == j { q(0, 1) } else { q(1, 1) })));

    for (c, coord) in f.coordinates().iter().enumerate() {
        let h = f.universal_extension(negation(), &coord.valuation).unwrap();
        assert_eq!(h.map(), f.coordinate_projection(c).map());
    }

    let th = equational_theory(
        &ClassK::from_algebras(vec![x1.clone()]).unwrap(),
        &set(&["x", "y"]),
        2,
        &limits,
    )
    .unwrap();
    let px = |s: &str| parse_term(x1.signature(), &set(&["x", "y"]), s).unwrap();
    assert_eq!(oracle_max_distance(&x1, &vars, &px("xor(x,y)"), &px("xor(y,x)")), q(0, 1));
    assert_eq!(oracle_max_distance(&x1, &vars, &px("x"), &px("y")), q(1, 1));
    assert_eq!(th.find(&px("xor(x,y)"), &px("xor(y,x)")).unwrap().eps, q(0, 1));
    assert_eq!(th.find(&px("x"), &px("y")).unwrap().eps, q(1, 1));
}

#[test]
fn membership_examples() {
    let limits = Limits::default();
    let k = ClassK::from_algebras(vec![xor(q(1, 1))]).unwrap();
    let xy = set(&["x", "y"]);
    match membership_bounded(&k, &xor(q(2, 1)), &xy, 3, &limits).unwrap() {
        Membership::Refuted { entry, valuation, distance } => {
            assert_eq!(entry.render(None), "x =1 y");
            assert_eq!(valuation, Valuation::from([("x", 0), ("y", 1)]));
            assert_eq!(distance, q(2, 1));
        }
        m => panic!("{m:?}"),
    }
    assert_eq!(
        membership_bounded(&k, &xor(q(1, 2)), &xy, 3, &limits).unwrap(),
        Membership::ConsistentUpTo { depth: 3 }
    );
}

#[test]
fn demo_examples() {
    let d = non_variety_demo(&r(1, 2)).unwrap();
    assert_eq!((d.min_distance.clone(), d.quotient_min_distance.clone()), (q(1, 1), q(1, 2)));
    assert!(d.holds_in_algebra && !d.holds_in_quotient);
    let d = non_variety_demo(&r(1, 4)).unwrap();
    assert_eq!(d.quotient_min_distance, q(1, 4));
    assert!(!d.holds_in_quotient);
}
