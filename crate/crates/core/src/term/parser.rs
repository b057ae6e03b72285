//! Recursive-descent parsers for signatures and terms.
//!
//! ```text
//! sig  := stmt (";" stmt)*        stmt := "op" NAME "/" NAT
//! term := NAME | NAME "(" term ("," term)* ")"
//! ```

use std::collections::BTreeSet;

use super::{Signature, SyntaxError, Term};

/// Byte cursor over source text; skips whitespace between tokens.
pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Skips whitespace and `#` line comments.
    pub fn skip_ws_and_comments(&mut self) {
        loop {
            self.skip_ws();
            if self.rest().starts_with('#') {
                let line = self.rest().find('\n').unwrap_or(self.rest().len());
                self.pos += line;
            } else {
                break;
            }
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::Syntax { pos: self.pos, message: message.into() }
    }

    /// Consumes the longest run of bytes matching `pred` with no leading
    /// whitespace skip.
    pub fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let len = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    pub fn ident(&mut self) -> Result<&'a str, SyntaxError> {
        self.skip_ws();
        match self.rest().chars().next() {
            Some(c) if c.is_ascii_alphabetic() => {
                Ok(self.take_while(|c| c.is_ascii_alphanumeric() || c == '_'))
            }
            _ => Err(self.error("expected identifier")),
        }
    }

    /// Consumes `word` if it appears as a whole identifier.
    pub fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        if rest.starts_with(word)
            && !rest[word.len()..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += word.len();
            true
        } else {
            false
        }
    }
}

/// Parses `op NAME/NAT (; op NAME/NAT)*`. Empty input gives the empty signature.
pub fn parse_signature(text: &str) -> Result<Signature, SyntaxError> {
    let mut cur = Cursor::new(text);
    let mut sig = Signature::empty();
    if cur.at_end() {
        return Ok(sig);
    }
    loop {
        if !cur.keyword("op") {
            return Err(cur.error("expected `op`"));
        }
        let name = cur.ident()?.to_string();
        cur.expect('/')?;
        cur.skip_ws();
        if cur.rest().starts_with('-') {
            return Err(SyntaxError::NegativeArity(name));
        }
        let digits = cur.take_while(|c| c.is_ascii_digit());
        let arity: usize = digits.parse().map_err(|_| cur.error("expected arity"))?;
        sig.push(name, arity)?;
        if !cur.eat(';') {
            break;
        }
        // tolerate a trailing separator
        if cur.at_end() {
            break;
        }
    }
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(sig)
}

/// Parses one term from the cursor, resolving bare names as constants or
/// declared variables.
pub(crate) fn term_at(
    cur: &mut Cursor<'_>,
    sig: &Signature,
    vars: &BTreeSet<String>,
) -> Result<Term, SyntaxError> {
    let name = cur.ident()?.to_string();
    if cur.eat('(') {
        let expected = sig.arity(&name).ok_or_else(|| SyntaxError::UnknownSymbol(name.clone()))?;
        let mut args = Vec::new();
        if !cur.eat(')') {
            loop {
                args.push(term_at(cur, sig, vars)?);
                if cur.eat(')') {
                    break;
                }
                cur.expect(',')?;
            }
        }
        if args.len() != expected {
            return Err(SyntaxError::ArityMismatch { symbol: name, expected, found: args.len() });
        }
        return Ok(Term::App(name, args));
    }
    match sig.arity(&name) {
        Some(0) => Ok(Term::App(name, Vec::new())),
        Some(expected) => Err(SyntaxError::ArityMismatch { symbol: name, expected, found: 0 }),
        None if vars.contains(&name) => Ok(Term::Var(name)),
        None => Err(SyntaxError::UndeclaredVariable(name)),
    }
}

/// Rejects variable declarations that collide with operation symbols.
pub(crate) fn check_vars(sig: &Signature, vars: &BTreeSet<String>) -> Result<(), SyntaxError> {
    for v in vars {
        if sig.index_of(v).is_some() {
            return Err(SyntaxError::VariableShadowsSymbol(v.clone()));
        }
        if !super::is_identifier(v) {
            return Err(SyntaxError::InvalidIdentifier(v.clone()));
        }
    }
    Ok(())
}

pub fn parse_term(
    sig: &Signature,
    vars: &BTreeSet<String>,
    text: &str,
) -> Result<Term, SyntaxError> {
    check_vars(sig, vars)?;
    let mut cur = Cursor::new(text);
    let t = term_at(&mut cur, sig, vars)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{enumerate_terms, format_term};

    fn vars(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn signatures() {
        let sig = parse_signature("op xor/2; op zero/0").unwrap();
        assert_eq!(sig, Signature::new([("xor", 2), ("zero", 0)]).unwrap());
        assert_eq!(parse_signature("op u/1").unwrap(), Signature::new([("u", 1)]).unwrap());
        assert_eq!(
            parse_signature("op f/2; op f/1"),
            Err(SyntaxError::DuplicateSymbol("f".into()))
        );
        assert_eq!(parse_signature("op f/-1"), Err(SyntaxError::NegativeArity("f".into())));
        assert!(matches!(parse_signature("op f 2"), Err(SyntaxError::Syntax { pos: 5, .. })));
        assert!(matches!(parse_signature("fn f/2"), Err(SyntaxError::Syntax { pos: 0, .. })));
        assert_eq!(parse_signature("  op  g / 3 ;").unwrap().arity("g"), Some(3));
        assert!(parse_signature("").unwrap().is_empty());
    }

    #[test]
    fn terms() {
        let sig = parse_signature("op xor/2").unwrap();
        let t = parse_term(&sig, &vars(&["x", "y"]), "xor(x,xor(x,y))").unwrap();
        assert_eq!(
            t,
            Term::app(
                "xor",
                vec![Term::var("x"), Term::app("xor", vec![Term::var("x"), Term::var("y")])]
            )
        );
        let sig_u = parse_signature("op u/1").unwrap();
        assert_eq!(
            parse_term(&sig_u, &vars(&["x"]), " u( u (x) ) ").unwrap(),
            Term::app("u", vec![Term::app("u", vec![Term::var("x")])])
        );
        assert_eq!(
            parse_term(&sig, &vars(&["x"]), "xor(x)"),
            Err(SyntaxError::ArityMismatch { symbol: "xor".into(), expected: 2, found: 1 })
        );
    }

    #[test]
    fn term_errors() {
        let sig = parse_signature("op xor/2; op zero/0").unwrap();
        let xs = vars(&["x"]);
        assert_eq!(parse_term(&sig, &xs, "y"), Err(SyntaxError::UndeclaredVariable("y".into())));
        assert_eq!(parse_term(&sig, &xs, "f(x)"), Err(SyntaxError::UnknownSymbol("f".into())));
        assert!(matches!(parse_term(&sig, &xs, "xor(x,"), Err(SyntaxError::Syntax { .. })));
        assert!(matches!(parse_term(&sig, &xs, "x x"), Err(SyntaxError::Syntax { pos: 2, .. })));
        assert_eq!(
            parse_term(&sig, &vars(&["zero"]), "zero"),
            Err(SyntaxError::VariableShadowsSymbol("zero".into()))
        );
    }

    #[test]
    fn constants_with_or_without_parens() {
        let sig = parse_signature("op xor/2; op zero/0").unwrap();
        let xs = vars(&["x"]);
        let a = parse_term(&sig, &xs, "xor(zero, x)").unwrap();
        let b = parse_term(&sig, &xs, "xor(zero(), x)").unwrap();
        assert_eq!(a, b);
        assert_eq!(format_term(&a), "xor(zero,x)");
    }

    #[test]
    fn exhaustive_roundtrip_depth_three() {
        let sig = parse_signature("op u/1; op xor/2").unwrap();
        let names = vec!["x".to_string()];
        let declared = vars(&["x"]);
        let all = enumerate_terms(&sig, &names, 3, 1 << 20).unwrap();
        assert_eq!(all.len(), 183);
        for t in &all {
            let back = parse_term(&sig, &declared, &format_term(t)).unwrap();
            assert_eq!(&back, t);
            assert!(back.vars().is_subset(&declared));
        }
    }
}
