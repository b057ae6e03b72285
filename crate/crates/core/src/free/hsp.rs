use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::{
    enumerate_congruences, generated_subalgebra, m_product, m_quotient, scale_metric, AlgebraError,
    Homomorphism, MetricAlgebra, OpTable,
};
use crate::metric::{DistMatrix, ExtDistance};
use crate::scalar::Scalar;
use crate::semantics::{satisfies_all, MEquation, Valuation};
use crate::term::Signature;
use crate::Limits;

use super::FreeError;

/// A constructed algebra that fails the theory.
#[derive(Clone, Debug, PartialEq)]
pub struct HspViolation<T> {
    /// `product`, `subalgebra` or `quotient`.
    pub kind: &'static str,
    pub description: String,
    pub equation: usize,
    pub valuation: Valuation,
    pub distance: ExtDistance<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HspReport<T> {
    /// Pool indices of the algebras satisfying the theory.
    pub models: Vec<usize>,
    pub non_models: Vec<usize>,
    pub products: usize,
    pub subalgebras: usize,
    pub quotients: usize,
    /// Quotients of quantitative models that are not quantitative.
    pub non_quantitative_quotients: usize,
    pub violations: Vec<HspViolation<T>>,
}

impl<T> HspReport<T> {
    pub fn constructed(&self) -> usize {
        self.products + self.subalgebras + self.quotients
    }

    pub fn is_closed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<T: Scalar> HspReport<T> {
    pub fn render(&self, decimal: Option<usize>) -> String {
        let mut out = String::new();
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "models: [{}]", list(&self.models));
        let _ = writeln!(out, "non-models: [{}]", list(&self.non_models));
        let _ = writeln!(out, "products: {}", self.products);
        let _ = writeln!(out, "subalgebras: {}", self.subalgebras);
        let _ = writeln!(out, "quotients: {}", self.quotients);
        let _ = writeln!(out, "non-quantitative quotients: {}", self.non_quantitative_quotients);
        let _ = writeln!(out, "violations: {}", self.violations.len());
        for v in &self.violations {
            let _ = writeln!(
                out,
                "  {} {}: equation {} fails at {} with distance {}",
                v.kind,
                v.description,
                v.equation,
                v.valuation,
                v.distance.render(decimal)
            );
        }
        out
    }
}

/// Builds every product of two models, every generated subalgebra and every
/// canonical quotient of each model, and checks each against `theory`.
pub fn hsp_closure_suite<T: Scalar>(
    theory: &[MEquation<T>],
    pool: &[Arc<MetricAlgebra<T>>],
    limits: &Limits,
) -> Result<HspReport<T>, FreeError> {
    let mut report = HspReport {
        models: Vec::new(),
        non_models: Vec::new(),
        products: 0,
        subalgebras: 0,
        quotients: 0,
        non_quantitative_quotients: 0,
        violations: Vec::new(),
    };
    let Some(first) = pool.first() else { return Ok(report) };
    let sig = first.signature().clone();
    if pool.iter().any(|a| *a.signature() != sig) {
        return Err(FreeError::SignatureMismatch);
    }
    for e in theory {
        e.lhs().check(&sig)?;
        e.rhs().check(&sig)?;
    }
    for (i, a) in pool.iter().enumerate() {
        if satisfies_all(a, theory, limits.valuations)?.is_none() {
            report.models.push(i);
        } else {
            report.non_models.push(i);
        }
    }

    let models = report.models.clone();
    let mut violations = Vec::new();
    let mut check = |kind: &'static str, description: String, a: &MetricAlgebra<T>| {
        satisfies_all(a, theory, limits.valuations).map(|failure| {
            if let Some(f) = failure {
                violations.push(HspViolation {
                    kind,
                    description,
                    equation: f.index,
                    valuation: f.valuation,
                    distance: f.distance,
                });
            }
        })
    };

    let mut products = 0;
    for (x, &i) in models.iter().enumerate() {
        for &j in &models[x..] {
            let p = m_product(
                &sig,
                &[pool[i].clone(), pool[j].clone()],
                limits.product_carrier,
                limits.table_cells,
            )?;
            check("product", format!("{i} x {j}"), &p.algebra)?;
            products += 1;
        }
    }

    let mut subalgebras = 0;
    let mut quotients = 0;
    let mut non_quantitative = 0;
    for &i in &models {
        let a = &pool[i];
        if a.len() > limits.congruence_carrier {
            return Err(AlgebraError::TooLarge {
                what: "subset enumeration carrier",
                size: a.len().to_string(),
                limit: limits.congruence_carrier,
            }
            .into());
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mask in 0u64..(1u64 << a.len()) {
            let gens: Vec<usize> = (0..a.len()).filter(|&b| mask >> b & 1 == 1).collect();
            let sub = match generated_subalgebra(a, &gens) {
                Ok(s) => s,
                Err(AlgebraError::EmptyClosure) => continue,
                Err(e) => return Err(e.into()),
            };
            if seen.insert(sub.embedding.map().to_vec()) {
                check("subalgebra", format!("of {i} on {:?}", sub.embedding.map()), &sub.algebra)?;
                subalgebras += 1;
            }
        }
        for p in enumerate_congruences(a, limits.congruence_carrier)? {
            let q = m_quotient(a, &p)?;
            if q.q_quotient == Some(false) {
                non_quantitative += 1;
            }
            check("quotient", format!("of {i} by {p}"), &q.algebra)?;
            quotients += 1;
        }
    }
    report.violations = violations;
    report.products = products;
    report.subalgebras = subalgebras;
    report.quotients = quotients;
    report.non_quantitative_quotients = non_quantitative;
    Ok(report)
}

/// A distance lower bound survives in `A` and is lost in an M-quotient of it.
#[derive(Clone, Debug)]
pub struct NonVarietyReport<T> {
    pub algebra: Arc<MetricAlgebra<T>>,
    pub quotient: Arc<MetricAlgebra<T>>,
    pub map: Homomorphism<T>,
    pub scale: T,
    pub min_distance: ExtDistance<T>,
    pub quotient_min_distance: ExtDistance<T>,
    /// All distinct points at distance at least 1.
    pub holds_in_algebra: bool,
    pub holds_in_quotient: bool,
    pub quotient_quantitative: bool,
}

impl<T: Scalar> NonVarietyReport<T> {
    pub fn render(&self, decimal: Option<usize>) -> String {
        let verdict = |b: bool| if b { "holds" } else { "fails" };
        let mut out = String::new();
        let _ = writeln!(out, "algebra: Z2 with xor, discrete metric");
        let _ = writeln!(out, "quotient: identity onto the metric scaled by {}", self.scale);
        let _ = writeln!(
            out,
            "identity is a surjective M-homomorphism: {}",
            self.map.is_surjective() && self.map.is_m_homomorphism()
        );
        let _ = writeln!(out, "quotient is quantitative: {}", self.quotient_quantitative);
        let _ = writeln!(
            out,
            "property `distinct points are at distance >= 1`: {} in the algebra (min {}), {} in the quotient (min {})",
            verdict(self.holds_in_algebra),
            self.min_distance.render(decimal),
            verdict(self.holds_in_quotient),
            self.quotient_min_distance.render(decimal),
        );
        if self.holds_in_algebra && !self.holds_in_quotient {
            let _ = writeln!(
                out,
                "the class defined by this lower bound is not closed under M-quotients, so no set of metric equations defines it"
            );
        }
        let _ = writeln!(
            out,
            "infinite analog: normed vector spaces, where the identity from R onto R with d(x,y) = |tanh y - tanh x| is an M-quotient leaving the class"
        );
        out
    }
}

/// `(Z2, xor)` with the discrete metric, its identity onto the metric
/// scaled by `scale`, and the lower bound `d(x, y) >= 1` for `x != y` on both.
pub fn non_variety_demo<T: Scalar>(scale: &T) -> Result<NonVarietyReport<T>, AlgebraError> {
    let sig = Signature::new([("xor", 2)]).expect("fixed signature");
    let one = ExtDistance::Finite(T::one());
    let dist =
        DistMatrix::from_fn(2, |i, j| if i == j { ExtDistance::zero() } else { one.clone() });
    let xor = OpTable::from_fn(2, 2, |a| a[0] ^ a[1]);
    let a = Arc::new(MetricAlgebra::new(sig, vec!["0".into(), "1".into()], dist, vec![xor])?);
    let (quotient, map) = scale_metric(&a, scale)?;
    let min_distance = a.dist().min_positive().expect("two distinct points");
    let quotient_min_distance = quotient.dist().min_positive().expect("two distinct points");
    Ok(NonVarietyReport {
        holds_in_algebra: min_distance >= one,
        holds_in_quotient: quotient_min_distance >= one,
        quotient_quantitative: quotient.is_quantitative().is_ok(),
        algebra: a,
        quotient,
        map,
        scale: scale.clone(),
        min_distance,
        quotient_min_distance,
    })
}
