//! Free algebras over a finite class, equational theories, bounded
//! membership and the closure suite.
//!
//! The free algebra over `X` for a class `K` is built inside the product of
//! one copy of `A` per pair `(A, v)` with `A ∈ K` and `v : X → A`, as the
//! subalgebra generated by the variable tuples. Each coordinate projection is
//! then the homomorphic extension of `v`, so every valuation into a member
//! factors through the free algebra, and the sup metric gives
//! `d(F s, F t) = max over (A, v) of d_A(v♯ s, v♯ t)`. When `K` is not closed
//! under products and subalgebras this is the free algebra of the class they
//! generate.

mod hsp;
mod theory;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{
    check_homomorphism, AlgebraError, Defect, HomDefect, Homomorphism, MetricAlgebra, OpTable,
};
use crate::metric::{DistMatrix, ExtDistance};
use crate::scalar::Scalar;
use crate::semantics::{eval_term, valuations, SemanticsError, Valuation};
use crate::term::{check_vars, Signature, SyntaxError, Term};
use crate::Limits;

pub use hsp::{hsp_closure_suite, non_variety_demo, HspReport, HspViolation, NonVarietyReport};
pub use theory::{equational_theory, membership_bounded, Membership, Theory, TheoryEntry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreeError {
    #[error("the class has no members")]
    EmptyClass,
    #[error("class members have different signatures")]
    SignatureMismatch,
    #[error("member {index} is invalid: {defects:?}")]
    InvalidMember { index: usize, defects: Vec<Defect> },
    #[error("no variables and no constants: the free algebra would be empty")]
    NoGenerators,
    #[error("{what} would be {size}, above the limit of {limit}")]
    TooLarge { what: &'static str, size: String, limit: usize },
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Semantics(#[from] SemanticsError),
    #[error("{0}")]
    Algebra(#[from] AlgebraError),
}

/// A finite nonempty class of valid metric algebras over one signature.
#[derive(Clone, Debug)]
pub struct ClassK<T> {
    members: Vec<Arc<MetricAlgebra<T>>>,
    quantitative: bool,
}

impl<T: Scalar> ClassK<T> {
    pub fn new(members: Vec<Arc<MetricAlgebra<T>>>) -> Result<Self, FreeError> {
        let first = members.first().ok_or(FreeError::EmptyClass)?;
        if members.iter().any(|m| m.signature() != first.signature()) {
            return Err(FreeError::SignatureMismatch);
        }
        for (index, m) in members.iter().enumerate() {
            let defects = m.validate();
            if !defects.is_empty() {
                return Err(FreeError::InvalidMember { index, defects });
            }
        }
        let quantitative = members.iter().all(|m| m.is_quantitative().is_ok());
        Ok(ClassK { members, quantitative })
    }

    pub fn from_algebras(members: Vec<MetricAlgebra<T>>) -> Result<Self, FreeError> {
        ClassK::new(members.into_iter().map(Arc::new).collect())
    }

    pub fn members(&self) -> &[Arc<MetricAlgebra<T>>] {
        &self.members
    }

    pub fn signature(&self) -> &Signature {
        self.members[0].signature()
    }

    /// All members are quantitative algebras.
    pub fn is_quantitative(&self) -> bool {
        self.quantitative
    }

    pub fn with_member(&self, extra: Arc<MetricAlgebra<T>>) -> Result<Self, FreeError> {
        let mut members = self.members.clone();
        members.push(extra);
        ClassK::new(members)
    }
}

/// One factor of the ambient product: member index and valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinate {
    pub member: usize,
    pub valuation: Valuation,
    /// `valuation` as a vector indexed like [`FreeAlgebra::vars`].
    values: Vec<usize>,
}

/// Why a valuation does not extend to an M-homomorphism out of the free algebra.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtensionError<T: Scalar> {
    #[error("target signature differs from the class signature")]
    SignatureMismatch,
    #[error("{0}")]
    Semantics(#[from] SemanticsError),
    #[error("not well defined: `{var}` and its representative `{rep}` take different values")]
    NotWellDefined { var: String, rep: String },
    #[error("representatives do not define a homomorphism: {0}")]
    NotHomomorphic(HomDefect),
    #[error("the extension expands distance between `{left}` and `{right}`: {before} -> {after}")]
    Expansive { left: String, right: String, before: ExtDistance<T>, after: ExtDistance<T> },
}

/// The free algebra of a finite class over a finite variable set.
#[derive(Clone, Debug)]
pub struct FreeAlgebra<T> {
    class: ClassK<T>,
    vars: Vec<String>,
    coordinates: Vec<Coordinate>,
    tuples: Vec<Vec<usize>>,
    base: Arc<MetricAlgebra<T>>,
    generators: BTreeMap<String, usize>,
    reps: Vec<Term>,
}

/// Builds the free algebra of `class` over `vars`.
pub fn free_algebra<T: Scalar>(
    class: &ClassK<T>,
    vars: &BTreeSet<String>,
    limits: &Limits,
) -> Result<FreeAlgebra<T>, FreeError> {
    FreeAlgebra::build(class, vars, limits)
}

impl<T: Scalar> FreeAlgebra<T> {
    pub fn build(
        class: &ClassK<T>,
        vars: &BTreeSet<String>,
        limits: &Limits,
    ) -> Result<Self, FreeError> {
        let sig = class.signature().clone();
        check_vars(&sig, vars)?;
        if vars.len() > limits.variables {
            return Err(FreeError::TooLarge {
                what: "variable count",
                size: vars.len().to_string(),
                limit: limits.variables,
            });
        }
        if vars.is_empty() && !sig.has_constant() {
            return Err(FreeError::NoGenerators);
        }
        let var_list: Vec<String> = vars.iter().cloned().collect();

        let mut total: Option<usize> = Some(0);
        for m in class.members() {
            total = total.and_then(|t| {
                m.len().checked_pow(vars.len() as u32).and_then(|c| t.checked_add(c))
            });
        }
        match total {
            Some(t) if t <= limits.free_coordinates => {}
            other => {
                return Err(FreeError::TooLarge {
                    what: "coordinate count",
                    size: other.map_or_else(|| "overflow".into(), |t| t.to_string()),
                    limit: limits.free_coordinates,
                })
            }
        }
        let mut coordinates = Vec::new();
        for (member, m) in class.members().iter().enumerate() {
            for valuation in valuations(vars, m.len()) {
                let values = var_list.iter().map(|x| valuation.get(x).unwrap()).collect();
                coordinates.push(Coordinate { member, valuation, values });
            }
        }

        let members = class.members();
        let apply_pointwise = |op: usize, args: &[&Vec<usize>]| -> Vec<usize> {
            coordinates
                .iter()
                .enumerate()
                .map(|(c, coord)| {
                    let column: Vec<usize> = args.iter().map(|t| t[c]).collect();
                    members[coord.member].apply(op, &column)
                })
                .collect()
        };

        let mut tuples: Vec<Vec<usize>> = Vec::new();
        let mut reps: Vec<Term> = Vec::new();
        let mut lookup: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut generators = BTreeMap::new();

        for (i, x) in var_list.iter().enumerate() {
            let tuple: Vec<usize> = coordinates.iter().map(|c| c.values[i]).collect();
            let idx = *lookup.entry(tuple.clone()).or_insert_with(|| {
                tuples.push(tuple);
                reps.push(Term::var(x));
                tuples.len() - 1
            });
            generators.insert(x.clone(), idx);
        }

        // Level-by-level closure: level d holds the elements whose least term
        // depth is d; new candidates use at least one argument from level d-1.
        let mut level_start = 0;
        let mut level_end = tuples.len();
        let mut depth = 0;
        loop {
            depth += 1;
            let mut fresh: HashMap<Vec<usize>, (String, Term)> = HashMap::new();
            for (op, s) in sig.symbols().iter().enumerate() {
                if s.arity == 0 {
                    if depth == 1 {
                        let t = apply_pointwise(op, &[]);
                        if !lookup.contains_key(&t) {
                            offer(&mut fresh, t, Term::constant(&s.name));
                        }
                    }
                    continue;
                }
                let known = level_end;
                let count =
                    known.checked_pow(s.arity as u32).ok_or_else(|| FreeError::TooLarge {
                        what: "closure step",
                        size: "overflow".into(),
                        limit: limits.free_carrier,
                    })?;
                let mut digits = vec![0usize; s.arity];
                for _ in 0..count {
                    if digits.iter().any(|&d| d >= level_start) {
                        let args: Vec<&Vec<usize>> = digits.iter().map(|&d| &tuples[d]).collect();
                        let t = apply_pointwise(op, &args);
                        if !lookup.contains_key(&t) {
                            let term = Term::app(
                                &s.name,
                                digits.iter().map(|&d| reps[d].clone()).collect(),
                            );
                            offer(&mut fresh, t, term);
                        }
                    }
                    for d in digits.iter_mut().rev() {
                        *d += 1;
                        if *d < known {
                            break;
                        }
                        *d = 0;
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            if tuples.len() + fresh.len() > limits.free_carrier {
                return Err(FreeError::TooLarge {
                    what: "free carrier",
                    size: format!("more than {}", tuples.len() + fresh.len() - 1),
                    limit: limits.free_carrier,
                });
            }
            let mut batch: Vec<(Vec<usize>, (String, Term))> = fresh.into_iter().collect();
            batch.sort_by(|a, b| a.1 .0.cmp(&b.1 .0));
            level_start = level_end;
            for (tuple, (_, term)) in batch {
                lookup.insert(tuple.clone(), tuples.len());
                tuples.push(tuple);
                reps.push(term);
            }
            level_end = tuples.len();
        }

        let n = tuples.len();
        let mut cells = n.checked_mul(n);
        for s in sig.symbols() {
            cells =
                cells.and_then(|c| n.checked_pow(s.arity as u32).and_then(|t| c.checked_add(t)));
        }
        if !matches!(cells, Some(c) if c <= limits.table_cells) {
            return Err(FreeError::TooLarge {
                what: "free algebra table cells",
                size: cells.map_or_else(|| "overflow".into(), |c| c.to_string()),
                limit: limits.table_cells,
            });
        }

        let dist = DistMatrix::from_fn(n, |i, j| {
            coordinates.iter().enumerate().fold(ExtDistance::zero(), |acc, (c, coord)| {
                acc.max(members[coord.member].d(tuples[i][c], tuples[j][c]).clone())
            })
        });
        let ops = sig
            .symbols()
            .iter()
            .enumerate()
            .map(|(op, s)| {
                OpTable::from_fn(n, s.arity, |args| {
                    let arg_tuples: Vec<&Vec<usize>> = args.iter().map(|&a| &tuples[a]).collect();
                    lookup[&apply_pointwise(op, &arg_tuples)]
                })
            })
            .collect();
        let names = reps.iter().map(Term::to_string).collect();
        let base = Arc::new(MetricAlgebra::from_parts_unchecked(sig, names, dist, ops));

        Ok(FreeAlgebra {
            class: class.clone(),
            vars: var_list,
            coordinates,
            tuples,
            base,
            generators,
            reps,
        })
    }

    pub fn class(&self) -> &ClassK<T> {
        &self.class
    }

    /// The free algebra as a metric algebra; element names are the
    /// representative terms.
    pub fn algebra(&self) -> &Arc<MetricAlgebra<T>> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_set(&self) -> BTreeSet<String> {
        self.vars.iter().cloned().collect()
    }

    pub fn coordinates(&self) -> &[Coordinate] {
        &self.coordinates
    }

    /// Coordinates of an element in the ambient product.
    pub fn tuple(&self, element: usize) -> &[usize] {
        &self.tuples[element]
    }

    pub fn generators(&self) -> &BTreeMap<String, usize> {
        &self.generators
    }

    /// Minimal-depth representative term of each element.
    pub fn reps(&self) -> &[Term] {
        &self.reps
    }

    pub fn rep(&self, element: usize) -> &Term {
        &self.reps[element]
    }

    /// Valuation sending each variable to its generator.
    pub fn generator_valuation(&self) -> Valuation {
        Valuation::new(self.generators.clone())
    }

    /// The canonical surjection `F` applied to a term.
    pub fn image(&self, t: &Term) -> Result<usize, SemanticsError> {
        eval_term(&self.base, &self.generator_valuation(), t)
    }

    /// `d(F s, F t)`.
    pub fn free_distance(&self, s: &Term, t: &Term) -> Result<ExtDistance<T>, SemanticsError> {
        let v = self.generator_valuation();
        let (a, b) = (eval_term(&self.base, &v, s)?, eval_term(&self.base, &v, t)?);
        Ok(self.base.d(a, b).clone())
    }

    /// Projection onto one `(member, valuation)` coordinate.
    pub fn coordinate_projection(&self, c: usize) -> Homomorphism<T> {
        let member = self.class.members()[self.coordinates[c].member].clone();
        let map = self.tuples.iter().map(|t| t[c]).collect();
        check_homomorphism(map, self.base.clone(), member)
            .expect("coordinate projection is a homomorphism")
    }

    /// Index of the coordinate for `(member, v)`, if `v` is a valuation of
    /// exactly the free variables.
    pub fn coordinate_of(&self, member: usize, v: &Valuation) -> Option<usize> {
        self.coordinates.iter().position(|c| c.member == member && c.valuation == *v)
    }

    /// The unique M-homomorphism `h` with `h ∘ F = v♯`, defined by
    /// `h(e) = v♯(rep e)` and verified before it is returned. Failure means
    /// `target` does not belong to the class generated by the members.
    pub fn universal_extension(
        &self,
        target: impl Into<Arc<MetricAlgebra<T>>>,
        v: &Valuation,
    ) -> Result<Homomorphism<T>, ExtensionError<T>> {
        let target = target.into();
        if target.signature() != self.base.signature() {
            return Err(ExtensionError::SignatureMismatch);
        }
        let map = self
            .reps
            .iter()
            .map(|t| eval_term(&target, v, t))
            .collect::<Result<Vec<usize>, _>>()?;
        for (x, &g) in &self.generators {
            let expected = v.get(x).ok_or_else(|| SemanticsError::Unbound(x.clone()))?;
            if map[g] != expected {
                return Err(ExtensionError::NotWellDefined {
                    var: x.clone(),
                    rep: self.reps[g].to_string(),
                });
            }
        }
        let h = check_homomorphism(map, self.base.clone(), target)
            .map_err(ExtensionError::NotHomomorphic)?;
        if let Some((a, b)) = h.expansion_witness() {
            return Err(ExtensionError::Expansive {
                left: self.reps[a].to_string(),
                right: self.reps[b].to_string(),
                before: self.base.d(a, b).clone(),
                after: h.target().d(h.apply(a), h.apply(b)).clone(),
            });
        }
        Ok(h)
    }
}

fn offer(fresh: &mut HashMap<Vec<usize>, (String, Term)>, tuple: Vec<usize>, term: Term) {
    let text = term.to_string();
    match fresh.get(&tuple) {
        Some((best, _)) if *best <= text => {}
        _ => {
            fresh.insert(tuple, (text, term));
        }
    }
}
