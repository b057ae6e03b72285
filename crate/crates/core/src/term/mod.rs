//! Signatures, terms and their textual syntax.

mod parser;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub(crate) use parser::{check_vars, term_at};
pub use parser::{parse_signature, parse_term, Cursor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("negative arity for symbol `{0}`")]
    NegativeArity(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("variable `{0}` is not declared")]
    UndeclaredVariable(String),
    #[error("variable `{0}` clashes with an operation symbol")]
    VariableShadowsSymbol(String),
}

/// Identifiers: ASCII letter followed by letters, digits or underscores.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Operation symbols with arities, in declaration order.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    symbols: Vec<Symbol>,
    index: HashMap<String, usize>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Signature {}

impl Signature {
    pub fn new<S: Into<String>>(
        symbols: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Self, SyntaxError> {
        let mut sig = Signature::default();
        for (name, arity) in symbols {
            sig.push(name.into(), arity)?;
        }
        Ok(sig)
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    fn push(&mut self, name: String, arity: usize) -> Result<(), SyntaxError> {
        if !is_identifier(&name) {
            return Err(SyntaxError::InvalidIdentifier(name));
        }
        if self.index.contains_key(&name) {
            return Err(SyntaxError::DuplicateSymbol(name));
        }
        self.index.insert(name.clone(), self.symbols.len());
        self.symbols.push(Symbol { name, arity });
        Ok(())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].arity)
    }

    pub fn constants(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.iter().filter(|s| s.arity == 0)
    }

    pub fn has_constant(&self) -> bool {
        self.constants().next().is_some()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "op {}/{}", s.name, s.arity)?;
        }
        Ok(())
    }
}

/// A first-order term. Compared structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(symbol.into(), args)
    }

    pub fn constant(symbol: impl Into<String>) -> Self {
        Term::App(symbol.into(), Vec::new())
    }

    /// Variables have depth 0; an application is one deeper than its deepest
    /// argument, so constants have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Checks symbols and arities against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<(), SyntaxError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                let expected = sig.arity(f).ok_or_else(|| SyntaxError::UnknownSymbol(f.clone()))?;
                if expected != args.len() {
                    return Err(SyntaxError::ArityMismatch {
                        symbol: f.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Sort key used for canonical representatives: depth, then text.
    pub fn canonical_key(&self) -> (usize, String) {
        (self.depth(), self.to_string())
    }
}

/// Variables occurring in `t`.
pub fn vars_of(t: &Term) -> BTreeSet<String> {
    t.vars()
}

/// Canonical text of a term; constants print as their bare name.
pub fn format_term(t: &Term) -> String {
    t.to_string()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::App(s, args) if args.is_empty() => f.write_str(s),
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// All terms over `vars` of depth at most `depth`, ordered by
/// [`Term::canonical_key`]. Fails once more than `limit` terms would be built.
pub fn enumerate_terms(
    sig: &Signature,
    vars: &[String],
    depth: usize,
    limit: usize,
) -> Option<Vec<Term>> {
    let mut terms: Vec<Term> = vars.iter().map(Term::var).collect();
    if terms.len() > limit {
        return None;
    }
    for _ in 0..depth {
        let mut next: Vec<Term> = vars.iter().map(Term::var).collect();
        for sym in sig.symbols() {
            let count = terms.len().checked_pow(sym.arity as u32)?;
            if next.len().checked_add(count)? > limit {
                return None;
            }
            let mut digits = vec![0usize; sym.arity];
            for _ in 0..count {
                next.push(Term::app(&sym.name, digits.iter().map(|&i| terms[i].clone()).collect()));
                for d in digits.iter_mut().rev() {
                    *d += 1;
                    if *d < terms.len() {
                        break;
                    }
                    *d = 0;
                }
            }
        }
        terms = next;
    }
    let mut keyed: Vec<((usize, String), Term)> =
        terms.into_iter().map(|t| (t.canonical_key(), t)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Some(keyed.into_iter().map(|(_, t)| t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }

    #[test]
    fn formatting() {
        assert_eq!(format_term(&x()), "x");
        assert_eq!(format_term(&Term::app("u", vec![x()])), "u(x)");
        assert_eq!(format_term(&Term::app("xor", vec![x(), Term::var("y")])), "xor(x,y)");
        assert_eq!(format_term(&Term::constant("zero")), "zero");
    }

    #[test]
    fn variables() {
        assert_eq!(vars_of(&x()), BTreeSet::from(["x".to_string()]));
        let t = Term::app("xor", vec![x(), Term::var("y")]);
        assert_eq!(vars_of(&t), BTreeSet::from(["x".to_string(), "y".to_string()]));
        assert!(vars_of(&Term::constant("zero")).is_empty());
    }

    #[test]
    fn depths() {
        assert_eq!(x().depth(), 0);
        assert_eq!(Term::constant("zero").depth(), 1);
        assert_eq!(Term::app("u", vec![Term::app("u", vec![x()])]).depth(), 2);
    }

    #[test]
    fn signature_rules() {
        assert!(matches!(
            Signature::new([("f", 2), ("f", 1)]),
            Err(SyntaxError::DuplicateSymbol(_))
        ));
        assert!(matches!(Signature::new([("1f", 2)]), Err(SyntaxError::InvalidIdentifier(_))));
        let sig = Signature::new([("xor", 2), ("zero", 0)]).unwrap();
        assert_eq!(sig.to_string(), "op xor/2; op zero/0");
        assert!(sig.has_constant());
    }

    #[test]
    fn term_counts() {
        let sig = Signature::new([("u", 1), ("xor", 2)]).unwrap();
        let vars = vec!["x".to_string(), "y".to_string()];
        // T0 = 2, T(d+1) = 2 + T(d) + T(d)^2
        let counts: Vec<usize> =
            (0..=3).map(|d| enumerate_terms(&sig, &vars, d, 1 << 20).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 8, 74, 5552]);
        assert!(enumerate_terms(&sig, &vars, 3, 1000).is_none());
        let t = enumerate_terms(&sig, &vars, 1, 100).unwrap();
        assert_eq!(t[0], x());
        assert_eq!(t[2].to_string(), "u(x)");
    }
}
