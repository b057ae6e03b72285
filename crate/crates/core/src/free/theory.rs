use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::MetricAlgebra;
use crate::metric::ExtDistance;
use crate::scalar::Scalar;
use crate::semantics::{satisfies, MEquation, Satisfaction, Valuation};
use crate::term::{enumerate_terms, Term};
use crate::Limits;

use super::{free_algebra, ClassK, FreeAlgebra, FreeError};

/// `lhs =eps rhs` with `eps` the free distance of the pair; `lhs` is the
/// canonically smaller term.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoryEntry<T> {
    pub lhs: Term,
    pub rhs: Term,
    pub eps: ExtDistance<T>,
}

impl<T: Scalar> TheoryEntry<T> {
    /// Infinite entries are kept for information but are not M-equations.
    pub fn is_equation(&self) -> bool {
        self.eps.is_finite()
    }

    pub fn to_equation(&self, vars: &BTreeSet<String>) -> Option<MEquation<T>> {
        let eps = self.eps.finite()?.clone();
        Some(
            MEquation::new(vars.clone(), self.lhs.clone(), self.rhs.clone(), eps)
                .expect("theory entries use only theory variables"),
        )
    }

    pub fn render(&self, decimal: Option<usize>) -> String {
        let line = format!("{} ={} {}", self.lhs, self.eps.render(decimal), self.rhs);
        if self.is_equation() {
            line
        } else {
            format!("# {line}")
        }
    }
}

/// The bounded equational theory of a class over a variable set.
#[derive(Clone, Debug, PartialEq)]
pub struct Theory<T> {
    pub vars: BTreeSet<String>,
    pub depth: usize,
    /// Sorted by `(lhs, rhs)` canonical keys, without duplicates.
    pub entries: Vec<TheoryEntry<T>>,
}

impl<T: Scalar> Theory<T> {
    /// The finite entries as M-equations, in entry order.
    pub fn equations(&self) -> Vec<MEquation<T>> {
        self.entries.iter().filter_map(|e| e.to_equation(&self.vars)).collect()
    }

    pub fn flagged(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_equation()).count()
    }

    pub fn find(&self, lhs: &Term, rhs: &Term) -> Option<&TheoryEntry<T>> {
        let (l, r) = orient(lhs.clone(), rhs.clone());
        self.entries.iter().find(|e| e.lhs == l && e.rhs == r)
    }

    pub fn render(&self, decimal: Option<usize>) -> String {
        self.entries.iter().map(|e| e.render(decimal) + "\n").collect()
    }
}

impl<T: Scalar> fmt::Display for Theory<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

fn orient(a: Term, b: Term) -> (Term, Term) {
    if b.canonical_key() < a.canonical_key() {
        (b, a)
    } else {
        (a, b)
    }
}

/// All pairs of distinct free elements (by representative), plus every term
/// of depth at most `depth` paired with its representative at distance 0.
pub fn equational_theory<T: Scalar>(
    k: &ClassK<T>,
    vars: &BTreeSet<String>,
    depth: usize,
    limits: &Limits,
) -> Result<Theory<T>, FreeError> {
    let free = free_algebra(k, vars, limits)?;
    theory_of(&free, depth, limits)
}

pub(crate) fn theory_of<T: Scalar>(
    free: &FreeAlgebra<T>,
    depth: usize,
    limits: &Limits,
) -> Result<Theory<T>, FreeError> {
    let n = free.len();
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs > limits.theory_entries {
        return Err(FreeError::TooLarge {
            what: "theory entries",
            size: pairs.to_string(),
            limit: limits.theory_entries,
        });
    }
    let terms = enumerate_terms(free.algebra().signature(), free.vars(), depth, limits.terms)
        .ok_or_else(|| FreeError::TooLarge {
            what: "term count",
            size: format!("more than {}", limits.terms),
            limit: limits.terms,
        })?;
    type Key = (usize, String);
    let mut keyed: Vec<(Key, Key, TheoryEntry<T>)> = Vec::new();
    let mut push = |a: Term, b: Term, eps: ExtDistance<T>| {
        let (lhs, rhs) = orient(a, b);
        keyed.push((lhs.canonical_key(), rhs.canonical_key(), TheoryEntry { lhs, rhs, eps }));
    };
    for i in 0..n {
        for j in i + 1..n {
            push(free.rep(i).clone(), free.rep(j).clone(), free.algebra().d(i, j).clone());
        }
    }
    for t in terms {
        let e = free.image(&t)?;
        if *free.rep(e) != t {
            push(t, free.rep(e).clone(), ExtDistance::zero());
        }
    }
    if keyed.len() > limits.theory_entries {
        return Err(FreeError::TooLarge {
            what: "theory entries",
            size: keyed.len().to_string(),
            limit: limits.theory_entries,
        });
    }
    keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    keyed.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    Ok(Theory {
        vars: free.var_set(),
        depth,
        entries: keyed.into_iter().map(|(_, _, e)| e).collect(),
    })
}

/// Verdict of a bounded membership check.
#[derive(Clone, Debug, PartialEq)]
pub enum Membership<T> {
    /// `entry` holds in every member of the class and fails in the candidate
    /// at `valuation`, where the candidate realizes `distance`.
    Refuted { entry: TheoryEntry<T>, valuation: Valuation, distance: ExtDistance<T> },
    /// No finite theory entry up to `depth` fails. Not a membership claim.
    ConsistentUpTo { depth: usize },
}

impl<T> Membership<T> {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Membership::Refuted { .. })
    }
}

/// Checks `b` against the finite entries of the bounded theory of `k`, in
/// entry order, stopping at the first failure.
pub fn membership_bounded<T: Scalar>(
    k: &ClassK<T>,
    b: &MetricAlgebra<T>,
    vars: &BTreeSet<String>,
    depth: usize,
    limits: &Limits,
) -> Result<Membership<T>, FreeError> {
    if b.signature() != k.signature() {
        return Err(FreeError::SignatureMismatch);
    }
    let theory = equational_theory(k, vars, depth, limits)?;
    for entry in &theory.entries {
        let Some(e) = entry.to_equation(&theory.vars) else { continue };
        if let Satisfaction::Fails { valuation, distance } = satisfies(b, &e, limits.valuations)? {
            return Ok(Membership::Refuted { entry: entry.clone(), valuation, distance });
        }
    }
    Ok(Membership::ConsistentUpTo { depth })
}
