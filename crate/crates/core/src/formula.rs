//! Propositional formulas over `0`, `1`, `&`, `|`, `->`, with `~p` read as
//! `p -> 0`.
//!
//! Concrete syntax, loosest binding first:
//!
//! ```text
//! formula := imp
//! imp     := or ("->" imp)?          right-associative
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | atom
//! atom    := ident | "0" | "1" | "(" formula ")"
//! ```
//!
//! Identifiers are `[A-Za-z_][A-Za-z0-9_]*`. Whitespace is ignored.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(usize),
    Bot,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(i: usize) -> Formula {
        Formula::Var(i)
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    pub fn negation(f: Formula) -> Formula {
        Formula::imp(f, Formula::Bot)
    }

    /// Maximal nesting depth of `->`.
    pub fn rank(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => 0,
            Formula::And(l, r) | Formula::Or(l, r) => l.rank().max(r.rank()),
            Formula::Imp(l, r) => 1 + l.rank().max(r.rank()),
        }
    }

    fn visit_vars(&self, f: &mut impl FnMut(usize)) {
        match self {
            Formula::Var(i) => f(*i),
            Formula::Bot | Formula::Top => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
        }
    }

    /// Number of distinct variables.
    pub fn var_count(&self) -> usize {
        let mut seen = Vec::new();
        self.visit_vars(&mut |i| {
            if !seen.contains(&i) {
                seen.push(i);
            }
        });
        seen.len()
    }

    /// One more than the largest variable index, or 0.
    pub fn var_bound(&self) -> usize {
        let mut m = 0;
        self.visit_vars(&mut |i| m = m.max(i + 1));
        m
    }

    /// Variables in order of first occurrence.
    pub fn first_occurrences(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        self.visit_vars(&mut |i| {
            if !seen.contains(&i) {
                seen.push(i);
            }
        });
        seen
    }

    pub fn map_vars(&self, f: &impl Fn(usize) -> usize) -> Formula {
        match self {
            Formula::Var(i) => Formula::Var(f(*i)),
            Formula::Bot => Formula::Bot,
            Formula::Top => Formula::Top,
            Formula::And(l, r) => Formula::and(l.map_vars(f), r.map_vars(f)),
            Formula::Or(l, r) => Formula::or(l.map_vars(f), r.map_vars(f)),
            Formula::Imp(l, r) => Formula::imp(l.map_vars(f), r.map_vars(f)),
        }
    }

    /// Copy with variables renumbered `0..k` in first-occurrence order.
    pub fn renumbered(&self) -> Formula {
        let order = self.first_occurrences();
        self.map_vars(&|i| order.iter().position(|&v| v == i).expect("occurs"))
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> Display<'a> {
        Display {
            formula: self,
            names: Some(names),
        }
    }

    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        parse(text, &mut VarTable::default())
    }
}

/// Default variable names: `x`, `y`, `z`, then `x3`, `x4`, ...
pub fn default_var_name(i: usize) -> String {
    match i {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        _ => format!("x{i}"),
    }
}

pub struct Display<'a> {
    formula: &'a Formula,
    names: Option<&'a [String]>,
}

const PREC_IMP: u8 = 0;
const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_UNARY: u8 = 3;

impl Display<'_> {
    fn name(&self, i: usize) -> String {
        self.names
            .and_then(|n| n.get(i).cloned())
            .unwrap_or_else(|| default_var_name(i))
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, ctx: u8) -> fmt::Result {
        let (prec, open) = match node {
            Formula::Imp(_, r) if **r == Formula::Bot => (PREC_UNARY, false),
            Formula::Imp(..) => (PREC_IMP, ctx > PREC_IMP),
            Formula::Or(..) => (PREC_OR, ctx > PREC_OR),
            Formula::And(..) => (PREC_AND, ctx > PREC_AND),
            _ => (PREC_UNARY, false),
        };
        let _ = prec;
        if open {
            f.write_str("(")?;
        }
        match node {
            Formula::Var(i) => f.write_str(&self.name(*i))?,
            Formula::Bot => f.write_str("0")?,
            Formula::Top => f.write_str("1")?,
            Formula::Imp(l, r) if **r == Formula::Bot => {
                f.write_str("~")?;
                self.write(f, l, PREC_UNARY)?;
            }
            Formula::Imp(l, r) => {
                self.write(f, l, PREC_OR)?;
                f.write_str(" -> ")?;
                self.write(f, r, PREC_IMP)?;
            }
            Formula::Or(l, r) => {
                self.write(f, l, PREC_OR)?;
                f.write_str(" | ")?;
                self.write(f, r, PREC_AND)?;
            }
            Formula::And(l, r) => {
                self.write(f, l, PREC_AND)?;
                f.write_str(" & ")?;
                self.write(f, r, PREC_UNARY)?;
            }
        }
        if open {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, PREC_IMP)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display {
            formula: self,
            names: None,
        }
        .fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: expected {}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
}

/// Name ↔ index assignment shared across one or more parses.
#[derive(Debug, Clone, Default)]
pub struct VarTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarTable {
    pub fn get_or_insert(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Parses `text`, numbering new variables through `table`.
pub fn parse(text: &str, table: &mut VarTable) -> Result<Formula, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        table,
    };
    let f = p.imp()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error(&["->", "|", "&", "end of input"]));
    }
    Ok(f)
}

struct Parser<'a, 't> {
    src: &'a [u8],
    pos: usize,
    table: &'t mut VarTable,
}

impl Parser<'_, '_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.pos,
            expected: expected.to_vec(),
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat("->") {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while self.eat("|") {
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat("~") {
            return Ok(Formula::negation(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        const EXPECTED: &[&str] = &["variable", "0", "1", "(", "~"];
        self.skip_ws();
        let Some(&c) = self.src.get(self.pos) else {
            return Err(self.error(EXPECTED));
        };
        match c {
            b'0' | b'1' => {
                let next = self.src.get(self.pos + 1);
                if next.is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') {
                    return Err(self.error(EXPECTED));
                }
                self.pos += 1;
                Ok(if c == b'0' {
                    Formula::Bot
                } else {
                    Formula::Top
                })
            }
            b'(' => {
                self.pos += 1;
                let f = self.imp()?;
                if !self.eat(")") {
                    return Err(self.error(&[")", "->", "|", "&"]));
                }
                Ok(f)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(Formula::Var(self.table.get_or_insert(name)))
            }
            _ => Err(self.error(EXPECTED)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let (x, y) = (Formula::var(0), Formula::var(1));
        assert_eq!(
            p("x -> y -> x"),
            Formula::imp(x.clone(), Formula::imp(y, x.clone()))
        );
        let nx = Formula::negation(x.clone());
        assert_eq!(
            p("~x | ~~x"),
            Formula::or(nx.clone(), Formula::negation(nx))
        );
        let err = Formula::parse("x & (y").unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(err.expected.contains(&")"));
    }

    #[test]
    fn precedence_and_whitespace() {
        assert_eq!(p("x&y|z->x"), p("((x & y) | z) -> x"));
        assert_eq!(p(" ~ x & y "), p("(~x) & y"));
        assert_eq!(
            p("x | y | z"),
            Formula::or(
                Formula::or(Formula::var(0), Formula::var(1)),
                Formula::var(2)
            )
        );
        assert!(Formula::parse("").is_err());
        assert!(Formula::parse("x y").is_err());
        assert!(Formula::parse("01").is_err());
        assert_eq!(Formula::parse("x ->").unwrap_err().offset, 4);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(p("x").rank(), 0);
        assert_eq!(p("x->y").rank(), 1);
        assert_eq!(p("((x->0)->x)->x").rank(), 3);
        assert_eq!(p("~~~x").rank(), 3);
        assert_eq!(p("(x->y) & (y -> (x | z))").rank(), 1);
    }

    #[test]
    fn vars_examples() {
        assert_eq!(p("x->x").var_count(), 1);
        assert_eq!(p("0->1").var_count(), 0);
        let mut t = VarTable::default();
        t.get_or_insert("x");
        let f = parse("y -> x", &mut t).unwrap();
        assert_eq!(f.var_count(), 2);
        assert_eq!(f, Formula::imp(Formula::var(1), Formula::var(0)));
        assert_eq!(
            f.renumbered(),
            Formula::imp(Formula::var(0), Formula::var(1))
        );
    }

    #[test]
    fn printing() {
        assert_eq!(p("x -> y -> x").to_string(), "x -> y -> x");
        assert_eq!(p("(x -> y) -> x").to_string(), "(x -> y) -> x");
        assert_eq!(p("~(x & y) | ~~x").to_string(), "~(x & y) | ~~x");
        assert_eq!(p("x & (y | z)").to_string(), "x & (y | z)");
        assert_eq!(p("x | (y | z)").to_string(), "x | (y | z)");
        let mut t = VarTable::default();
        let f = parse("p -> q1", &mut t).unwrap();
        assert_eq!(f.display_with(t.names()).to_string(), "p -> q1");
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (0usize..4).prop_map(Formula::Var),
            Just(Formula::Bot),
            Just(Formula::Top),
        ];
        leaf.prop_recursive(6, 48, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::imp(l, r)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(f in arb_formula()) {
            let f = f.renumbered();
            let printed = f.to_string();
            prop_assert_eq!(Formula::parse(&printed).unwrap(), f);
        }

        #[test]
        fn rank_is_invariant_under_renumbering(f in arb_formula()) {
            prop_assert_eq!(f.renumbered().rank(), f.rank());
            prop_assert_eq!(f.renumbered().var_count(), f.var_count());
        }
    }
}
