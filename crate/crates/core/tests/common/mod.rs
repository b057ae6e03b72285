//! Fixtures and brute-force oracles shared by the integration tests. The
//! oracles work on plain vectors and never call the library's evaluators,
//! closures or constructions.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use metalg::{DistMatrix, ExactAlgebra, ExactDistance, OpTable, Rational, Signature, Term};
use rand::Rng;

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn q(n: i64, d: i64) -> ExactDistance {
    ExactDistance::Finite(r(n, d))
}

pub fn inf() -> ExactDistance {
    ExactDistance::Infinite
}

pub fn sig(symbols: &[(&str, usize)]) -> Signature {
    Signature::new(symbols.iter().map(|&(s, a)| (s, a))).unwrap()
}

pub fn ux() -> Signature {
    sig(&[("u", 1), ("xor", 2)])
}

pub fn algebra(
    sig: Signature,
    dist: Vec<Vec<ExactDistance>>,
    mut op: impl FnMut(&str, &[usize]) -> usize,
) -> ExactAlgebra {
    let n = dist.len();
    let ops = sig
        .symbols()
        .iter()
        .map(|s| OpTable::from_fn(n, s.arity, |args| op(&s.name, args)))
        .collect();
    let names = (0..n).map(|i| i.to_string()).collect();
    ExactAlgebra::new(sig, names, DistMatrix::from_rows(dist).unwrap(), ops).unwrap()
}

pub fn uniform(n: usize, d: ExactDistance) -> Vec<Vec<ExactDistance>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { q(0, 1) } else { d.clone() }).collect()).collect()
}

pub fn xor(d: ExactDistance) -> ExactAlgebra {
    algebra(sig(&[("xor", 2)]), uniform(2, d), |_, a| a[0] ^ a[1])
}

pub fn negation() -> ExactAlgebra {
    algebra(sig(&[("u", 1)]), uniform(2, q(1, 1)), |_, a| 1 - a[0])
}

/// `Z_n` with addition and the constant `zero`.
pub fn cyclic(n: usize, dist: Vec<Vec<ExactDistance>>) -> ExactAlgebra {
    assert_eq!(dist.len(), n);
    algebra(sig(&[("add", 2), ("zero", 0)]), dist, |s, a| match s {
        "add" => (a[0] + a[1]) % n,
        _ => 0,
    })
}

pub fn cycle_metric(n: usize) -> Vec<Vec<ExactDistance>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = (i as i64 - j as i64).unsigned_abs() as usize;
                    q(k.min(n - k) as i64, 1)
                })
                .collect()
        })
        .collect()
}

pub fn line_metric(n: usize) -> Vec<Vec<ExactDistance>> {
    (0..n).map(|i| (0..n).map(|j| q((i as i64 - j as i64).abs(), 1)).collect()).collect()
}

/// Floyd–Warshall over a plain matrix.
pub fn oracle_closure(w: &[Vec<ExactDistance>]) -> Vec<Vec<ExactDistance>> {
    let n = w.len();
    let mut d = w.to_vec();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Random metric on `n` points: closure of symmetric positive weights
/// `k/den` with `k` in `1..=max_k`, occasionally infinite.
pub fn random_metric(
    rng: &mut impl Rng,
    n: usize,
    den: i64,
    max_k: i64,
) -> Vec<Vec<ExactDistance>> {
    let mut w = vec![vec![q(0, 1); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = if rng.gen_ratio(1, 12) { inf() } else { q(rng.gen_range(1..=max_k), den) };
            w[i][j] = d.clone();
            w[j][i] = d;
        }
    }
    oracle_closure(&w)
}

pub fn random_algebra(rng: &mut impl Rng, sig: &Signature, n: usize) -> ExactAlgebra {
    let den = rng.gen_range(1..=3);
    let dist = random_metric(rng, n, den, 4);
    let mut tables: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for s in sig.symbols() {
        let cells = (0..n.pow(s.arity as u32)).map(|_| rng.gen_range(0..n)).collect();
        tables.insert(s.name.clone(), cells);
    }
    algebra(sig.clone(), dist, |s, args| {
        let index = args.iter().fold(0, |acc, &a| acc * n + a);
        tables[s][index]
    })
}

/// Independent term evaluation straight off the tables.
pub fn oracle_eval(a: &ExactAlgebra, env: &BTreeMap<String, usize>, t: &Term) -> usize {
    match t {
        Term::Var(x) => env[x],
        Term::App(f, args) => {
            let values: Vec<usize> = args.iter().map(|s| oracle_eval(a, env, s)).collect();
            let n = a.len();
            let index = values.iter().fold(0, |acc, &v| acc * n + v);
            a.table(f).unwrap().cells()[index]
        }
    }
}

/// Every assignment of `vars` into `0..n`.
pub fn oracle_envs(vars: &[String], n: usize) -> Vec<BTreeMap<String, usize>> {
    let mut envs = vec![BTreeMap::new()];
    for x in vars {
        envs = envs
            .into_iter()
            .flat_map(|e| {
                (0..n).map(move |v| {
                    let mut e = e.clone();
                    e.insert(x.clone(), v);
                    e
                })
            })
            .collect();
    }
    envs
}

/// `max over envs of d(env♯ s, env♯ t)`.
pub fn oracle_max_distance(a: &ExactAlgebra, vars: &[String], s: &Term, t: &Term) -> ExactDistance {
    oracle_envs(vars, a.len()).iter().fold(q(0, 1), |acc, env| {
        acc.max(a.d(oracle_eval(a, env, s), oracle_eval(a, env, t)).clone())
    })
}

/// All terms of depth at most `depth`, built independently of the library.
pub fn oracle_terms(sig: &Signature, vars: &[String], depth: usize) -> Vec<Term> {
    let mut terms: Vec<Term> = vars.iter().map(|x| Term::Var(x.clone())).collect();
    for _ in 0..depth {
        let mut next: Vec<Term> = vars.iter().map(|x| Term::Var(x.clone())).collect();
        for s in sig.symbols() {
            let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
            for _ in 0..s.arity {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        terms.iter().map(move |x| {
                            let mut t = t.clone();
                            t.push(x.clone());
                            t
                        })
                    })
                    .collect();
            }
            next.extend(tuples.into_iter().map(|args| Term::App(s.name.clone(), args)));
        }
        terms = next;
    }
    terms
}

pub fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}
