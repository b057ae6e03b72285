//! Valuations, term evaluation and satisfaction of metric equations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::MetricAlgebra;
use crate::metric::ExtDistance;
use crate::scalar::Scalar;
use crate::term::{check_vars, term_at, Signature, SyntaxError, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("variable `{0}` is not bound by the valuation")]
    Unbound(String),
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("valuation maps `{var}` to {value}, outside the carrier")]
    OutOfRange { var: String, value: usize },
    #[error("{valuations} valuations exceed the limit of {limit}")]
    TooManyValuations { valuations: String, limit: usize },
    #[error("equation uses variables outside its declared set: {0:?}")]
    UndeclaredVariables(Vec<String>),
    #[error("epsilon must be finite and nonnegative, got {0}")]
    BadEpsilon(String),
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
}

/// A total assignment of carrier indices to variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(BTreeMap<String, usize>);

impl Valuation {
    pub fn new(map: BTreeMap<String, usize>) -> Self {
        Valuation(map)
    }

    pub fn empty() -> Self {
        Valuation(BTreeMap::new())
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, usize)> {
        self.0.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Renders with element names, e.g. `x=0, y=1`.
    pub fn display_with<T: Scalar>(&self, a: &MetricAlgebra<T>) -> String {
        self.0.iter().map(|(k, &v)| format!("{k}={}", a.name(v))).collect::<Vec<_>>().join(", ")
    }
}

impl<const N: usize> From<[(&str, usize); N]> for Valuation {
    fn from(pairs: [(&str, usize); N]) -> Self {
        Valuation(pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// All valuations of `vars` into a carrier of size `n`, lexicographic in
/// (variable name, carrier index): the first variable varies slowest.
pub struct Valuations {
    vars: Vec<String>,
    digits: Vec<usize>,
    n: usize,
    done: bool,
}

pub fn valuations(vars: &BTreeSet<String>, n: usize) -> Valuations {
    let vars: Vec<String> = vars.iter().cloned().collect();
    let done = n == 0 && !vars.is_empty();
    Valuations { digits: vec![0; vars.len()], vars, n, done }
}

impl Iterator for Valuations {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        if self.done {
            return None;
        }
        let v = Valuation(self.vars.iter().cloned().zip(self.digits.iter().copied()).collect());
        self.done = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.n {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(v)
    }
}

/// Number of valuations `n^k`, or `None` on overflow.
pub fn valuation_count(n: usize, k: usize) -> Option<usize> {
    n.checked_pow(k as u32)
}

/// `v♯(t)`: variables through `v`, applications through the tables.
pub fn eval_term<T: Scalar>(
    a: &MetricAlgebra<T>,
    v: &Valuation,
    t: &Term,
) -> Result<usize, SemanticsError> {
    match t {
        Term::Var(x) => {
            let value = v.get(x).ok_or_else(|| SemanticsError::Unbound(x.clone()))?;
            if value >= a.len() {
                return Err(SemanticsError::OutOfRange { var: x.clone(), value });
            }
            Ok(value)
        }
        Term::App(f, args) => {
            let op = a
                .signature()
                .index_of(f)
                .ok_or_else(|| SemanticsError::UnknownSymbol(f.clone()))?;
            let mut values = Vec::with_capacity(args.len());
            for arg in args {
                values.push(eval_term(a, v, arg)?);
            }
            if values.len() != a.signature().symbols()[op].arity {
                return Err(SemanticsError::Syntax(SyntaxError::ArityMismatch {
                    symbol: f.clone(),
                    expected: a.signature().symbols()[op].arity,
                    found: values.len(),
                }));
            }
            Ok(a.apply(op, &values))
        }
    }
}

/// A metric equation `X ⊢ s =ε t` with finite `ε ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MEquation<T> {
    vars: BTreeSet<String>,
    lhs: Term,
    rhs: Term,
    eps: T,
}

impl<T: Scalar> MEquation<T> {
    pub fn new(
        vars: BTreeSet<String>,
        lhs: Term,
        rhs: Term,
        eps: T,
    ) -> Result<Self, SemanticsError> {
        if eps < T::zero() {
            return Err(SemanticsError::BadEpsilon(eps.to_string()));
        }
        fn undeclared(t: &Term, vars: &BTreeSet<String>, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(x) if !vars.contains(x) => {
                    out.insert(x.clone());
                }
                Term::Var(_) => {}
                Term::App(_, args) => args.iter().for_each(|a| undeclared(a, vars, out)),
            }
        }
        let mut extra = BTreeSet::new();
        undeclared(&lhs, &vars, &mut extra);
        undeclared(&rhs, &vars, &mut extra);
        if !extra.is_empty() {
            let extra: Vec<String> = extra.into_iter().collect();
            return Err(SemanticsError::UndeclaredVariables(extra));
        }
        Ok(MEquation { vars, lhs, rhs, eps })
    }

    /// Equation over exactly the variables occurring in its terms.
    pub fn over_own_vars(lhs: Term, rhs: Term, eps: T) -> Result<Self, SemanticsError> {
        let vars = lhs.vars().union(&rhs.vars()).cloned().collect();
        MEquation::new(vars, lhs, rhs, eps)
    }

    /// Same equation over a different variable set (must contain the used ones).
    pub fn with_vars(&self, vars: BTreeSet<String>) -> Result<Self, SemanticsError> {
        MEquation::new(vars, self.lhs.clone(), self.rhs.clone(), self.eps.clone())
    }

    pub fn with_eps(&self, eps: T) -> Result<Self, SemanticsError> {
        MEquation::new(self.vars.clone(), self.lhs.clone(), self.rhs.clone(), eps)
    }

    pub fn vars(&self) -> &BTreeSet<String> {
        &self.vars
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn eps(&self) -> &T {
        &self.eps
    }
}

impl<T: Scalar> fmt::Display for MEquation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ={} {}", self.lhs, self.eps, self.rhs)
    }
}

/// Outcome of a satisfaction check.
#[derive(Clone, Debug, PartialEq)]
pub enum Satisfaction<T> {
    Holds,
    /// The lexicographically least violating valuation and the distance it
    /// realizes.
    Fails {
        valuation: Valuation,
        distance: ExtDistance<T>,
    },
}

impl<T> Satisfaction<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Satisfaction::Holds)
    }
}

/// Checks `d(v♯ s, v♯ t) ≤ ε` for every valuation of the equation's variables.
pub fn satisfies<T: Scalar>(
    a: &MetricAlgebra<T>,
    e: &MEquation<T>,
    max_valuations: usize,
) -> Result<Satisfaction<T>, SemanticsError> {
    let count = valuation_count(a.len(), e.vars.len());
    match count {
        Some(c) if c <= max_valuations => {}
        _ => {
            return Err(SemanticsError::TooManyValuations {
                valuations: format!("{}^{}", a.len(), e.vars.len()),
                limit: max_valuations,
            })
        }
    }
    let vars: Vec<&String> = e.vars.iter().collect();
    let lhs = Program::compile(a, &vars, &e.lhs)?;
    let rhs = Program::compile(a, &vars, &e.rhs)?;
    let n = a.len();
    // within[i * n + j] iff d(i, j) <= eps
    let within: Vec<bool> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a.d(i, j).within(&e.eps))
        .collect();
    let mut digits = vec![0; vars.len()];
    let mut stack = Vec::new();
    loop {
        let (s, t) = (lhs.run(a, &digits, &mut stack), rhs.run(a, &digits, &mut stack));
        if !within[s * n + t] {
            let valuation =
                Valuation(vars.iter().map(|x| (*x).clone()).zip(digits.iter().copied()).collect());
            return Ok(Satisfaction::Fails { valuation, distance: a.d(s, t).clone() });
        }
        // same order as `valuations`: the last variable varies fastest
        let mut carried = true;
        for x in digits.iter_mut().rev() {
            *x += 1;
            if *x < n {
                carried = false;
                break;
            }
            *x = 0;
        }
        if carried {
            return Ok(Satisfaction::Holds);
        }
    }
}

/// A term in postfix form over variable slots, checked once against the
/// signature so that evaluation cannot fail.
struct Program {
    steps: Vec<Step>,
}

enum Step {
    Var(usize),
    Op(usize, usize),
}

impl Program {
    fn compile<T: Scalar>(
        a: &MetricAlgebra<T>,
        vars: &[&String],
        t: &Term,
    ) -> Result<Self, SemanticsError> {
        fn go<T: Scalar>(
            a: &MetricAlgebra<T>,
            vars: &[&String],
            t: &Term,
            steps: &mut Vec<Step>,
        ) -> Result<(), SemanticsError> {
            match t {
                Term::Var(x) => {
                    let slot =
                        vars.binary_search(&x).map_err(|_| SemanticsError::Unbound(x.clone()))?;
                    steps.push(Step::Var(slot));
                }
                Term::App(f, args) => {
                    let op = a
                        .signature()
                        .index_of(f)
                        .ok_or_else(|| SemanticsError::UnknownSymbol(f.clone()))?;
                    let arity = a.signature().symbols()[op].arity;
                    if args.len() != arity {
                        return Err(SemanticsError::Syntax(SyntaxError::ArityMismatch {
                            symbol: f.clone(),
                            expected: arity,
                            found: args.len(),
                        }));
                    }
                    for arg in args {
                        go(a, vars, arg, steps)?;
                    }
                    steps.push(Step::Op(op, arity));
                }
            }
            Ok(())
        }
        let mut steps = Vec::new();
        go(a, vars, t, &mut steps)?;
        Ok(Program { steps })
    }

    fn run<T: Scalar>(
        &self,
        a: &MetricAlgebra<T>,
        digits: &[usize],
        stack: &mut Vec<usize>,
    ) -> usize {
        stack.clear();
        for step in &self.steps {
            match *step {
                Step::Var(slot) => stack.push(digits[slot]),
                Step::Op(op, arity) => {
                    let base = stack.len() - arity;
                    let value = a.apply(op, &stack[base..]);
                    stack.truncate(base);
                    stack.push(value);
                }
            }
        }
        stack[0]
    }
}

/// First failing equation (by position) with its witness.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoryFailure<T> {
    pub index: usize,
    pub valuation: Valuation,
    pub distance: ExtDistance<T>,
}

pub fn satisfies_all<T: Scalar>(
    a: &MetricAlgebra<T>,
    theory: &[MEquation<T>],
    max_valuations: usize,
) -> Result<Option<TheoryFailure<T>>, SemanticsError> {
    for (index, e) in theory.iter().enumerate() {
        if let Satisfaction::Fails { valuation, distance } = satisfies(a, e, max_valuations)? {
            return Ok(Some(TheoryFailure { index, valuation, distance }));
        }
    }
    Ok(None)
}

/// Parses an equation file:
///
/// ```text
/// vars x, y;
/// eq xor(x,y) =0 xor(y,x);
/// eq x =1/2 y;
/// ```
///
/// `vars` sets the variable set for the following equations; `#` starts a
/// line comment.
pub fn parse_equations<T: Scalar>(
    sig: &Signature,
    text: &str,
) -> Result<Vec<MEquation<T>>, SemanticsError> {
    use crate::term::Cursor;

    let mut cur = Cursor::new(text);
    let mut vars: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    loop {
        cur.skip_ws_and_comments();
        if cur.at_end() {
            break;
        }
        if cur.keyword("vars") {
            vars.clear();
            if cur.peek() != Some(';') {
                loop {
                    vars.insert(cur.ident()?.to_string());
                    if !cur.eat(',') {
                        break;
                    }
                }
            }
            check_vars(sig, &vars)?;
        } else if cur.keyword("eq") {
            let lhs = term_at(&mut cur, sig, &vars)?;
            cur.expect('=')?;
            let literal_pos = cur.pos();
            let literal = cur.take_while(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '/'));
            let eps = match ExtDistance::<T>::parse(literal) {
                Some(ExtDistance::Finite(e)) => e,
                Some(ExtDistance::Infinite) => {
                    return Err(SemanticsError::BadEpsilon(literal.to_string()))
                }
                None => {
                    return Err(SyntaxError::Syntax {
                        pos: literal_pos,
                        message: format!(
                            "expected a distance literal after `=`, found `{literal}`"
                        ),
                    }
                    .into())
                }
            };
            let rhs = term_at(&mut cur, sig, &vars)?;
            out.push(MEquation::new(vars.clone(), lhs, rhs, eps)?);
        } else {
            return Err(cur.error("expected `vars` or `eq`").into());
        }
        cur.skip_ws_and_comments();
        if !cur.eat(';') && !cur.at_end() {
            return Err(cur.error("expected `;`").into());
        }
    }
    Ok(out)
}

/// Renders equations in the file syntax accepted by [`parse_equations`].
pub fn format_equations<T: Scalar>(equations: &[MEquation<T>]) -> String {
    let mut out = String::new();
    let mut current: Option<&BTreeSet<String>> = None;
    for e in equations {
        if current != Some(&e.vars) {
            let names: Vec<&str> = e.vars.iter().map(String::as_str).collect();
            out.push_str(&format!("vars {};\n", names.join(", ")));
            current = Some(&e.vars);
        }
        out.push_str(&format!("eq {e};\n"));
    }
    out
}
