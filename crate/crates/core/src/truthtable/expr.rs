//! Boolean expression trees over named single-bit signals.
//!
//! Text grammar, loosest binding first: `|`, `^`, `&`, prefix `!`.
//! Atoms are `0`, `1`, identifiers `[A-Za-z][A-Za-z0-9]*` and parenthesised
//! sub-expressions. Whitespace is ignored.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};
use std::str::FromStr;

use super::TruthTableError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Const(bool),
    Var(String),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
    Xor(Vec<BoolExpr>),
}

/// Source of signal values during evaluation.
pub trait Assignment {
    fn value(&self, signal: &str) -> Option<bool>;
}

impl<S: std::borrow::Borrow<str> + Eq + std::hash::Hash> Assignment for std::collections::HashMap<S, bool> {
    fn value(&self, signal: &str) -> Option<bool> {
        self.get(signal).copied()
    }
}

impl<S: std::borrow::Borrow<str> + Ord> Assignment for std::collections::BTreeMap<S, bool> {
    fn value(&self, signal: &str) -> Option<bool> {
        self.get(signal).copied()
    }
}

impl<S: AsRef<str>> Assignment for [(S, bool)] {
    fn value(&self, signal: &str) -> Option<bool> {
        self.iter().find(|(name, _)| name.as_ref() == signal).map(|(_, v)| *v)
    }
}

impl<S: AsRef<str>, const N: usize> Assignment for [(S, bool); N] {
    fn value(&self, signal: &str) -> Option<bool> {
        self.as_slice().value(signal)
    }
}

impl<F: Fn(&str) -> Option<bool>> Assignment for F {
    fn value(&self, signal: &str) -> Option<bool> {
        self(signal)
    }
}

impl BoolExpr {
    pub fn var(name: impl Into<String>) -> Self {
        BoolExpr::Var(name.into())
    }

    pub fn constant(value: bool) -> Self {
        BoolExpr::Const(value)
    }

    /// Partial product `A<a> & B<b>`.
    pub fn partial_product(a: usize, b: usize) -> Self {
        BoolExpr::And(vec![Self::var(format!("A{a}")), Self::var(format!("B{b}"))])
    }

    /// Two-of-three majority, the carry of a full adder.
    pub fn majority(a: BoolExpr, b: BoolExpr, c: BoolExpr) -> Self {
        BoolExpr::Or(vec![a.clone() & b.clone(), a & c.clone(), b & c])
    }

    pub fn eval<A: Assignment + ?Sized>(&self, assignment: &A) -> Result<bool, TruthTableError> {
        Ok(match self {
            BoolExpr::Const(v) => *v,
            BoolExpr::Var(name) => {
                assignment.value(name).ok_or_else(|| TruthTableError::UnboundVariable(name.clone()))?
            }
            BoolExpr::Not(inner) => !inner.eval(assignment)?,
            BoolExpr::And(ops) => {
                let mut acc = true;
                for op in ops {
                    acc &= op.eval(assignment)?;
                }
                acc
            }
            BoolExpr::Or(ops) => {
                let mut acc = false;
                for op in ops {
                    acc |= op.eval(assignment)?;
                }
                acc
            }
            BoolExpr::Xor(ops) => {
                let mut acc = false;
                for op in ops {
                    acc ^= op.eval(assignment)?;
                }
                acc
            }
        })
    }

    /// All signal names mentioned, sorted.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var(name) => {
                out.insert(name.clone());
            }
            BoolExpr::Not(inner) => inner.collect_variables(out),
            BoolExpr::And(ops) | BoolExpr::Or(ops) | BoolExpr::Xor(ops) => {
                ops.iter().for_each(|op| op.collect_variables(out))
            }
        }
    }

    /// Replace every occurrence of `name` with `with`.
    pub fn substitute(&self, name: &str, with: &BoolExpr) -> BoolExpr {
        match self {
            BoolExpr::Var(v) if v == name => with.clone(),
            BoolExpr::Const(_) | BoolExpr::Var(_) => self.clone(),
            BoolExpr::Not(inner) => BoolExpr::Not(Box::new(inner.substitute(name, with))),
            BoolExpr::And(ops) => BoolExpr::And(ops.iter().map(|o| o.substitute(name, with)).collect()),
            BoolExpr::Or(ops) => BoolExpr::Or(ops.iter().map(|o| o.substitute(name, with)).collect()),
            BoolExpr::Xor(ops) => BoolExpr::Xor(ops.iter().map(|o| o.substitute(name, with)).collect()),
        }
    }

    /// Rename variables through `map`; names it returns `None` for are kept.
    pub fn rename(&self, map: &impl Fn(&str) -> Option<String>) -> BoolExpr {
        match self {
            BoolExpr::Var(v) => BoolExpr::Var(map(v).unwrap_or_else(|| v.clone())),
            BoolExpr::Const(_) => self.clone(),
            BoolExpr::Not(inner) => BoolExpr::Not(Box::new(inner.rename(map))),
            BoolExpr::And(ops) => BoolExpr::And(ops.iter().map(|o| o.rename(map)).collect()),
            BoolExpr::Or(ops) => BoolExpr::Or(ops.iter().map(|o| o.rename(map)).collect()),
            BoolExpr::Xor(ops) => BoolExpr::Xor(ops.iter().map(|o| o.rename(map)).collect()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Or(ops) | BoolExpr::And(ops) | BoolExpr::Xor(ops) if ops.len() < 2 => 4,
            BoolExpr::Or(_) => 1,
            BoolExpr::Xor(_) => 2,
            BoolExpr::And(_) => 3,
            BoolExpr::Not(_) | BoolExpr::Const(_) | BoolExpr::Var(_) => 4,
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        if self.precedence() <= parent {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (ops, sep, empty) = match self {
            BoolExpr::Const(v) => return write!(f, "{}", u8::from(*v)),
            BoolExpr::Var(name) => return write!(f, "{name}"),
            BoolExpr::Not(inner) => {
                write!(f, "!")?;
                return inner.fmt_operand(f, 3);
            }
            BoolExpr::And(ops) => (ops, " & ", "1"),
            BoolExpr::Or(ops) => (ops, " | ", "0"),
            BoolExpr::Xor(ops) => (ops, " ^ ", "0"),
        };
        match ops.as_slice() {
            [] => write!(f, "{empty}"),
            [single] => write!(f, "{single}"),
            _ => {
                let prec = self.precedence();
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    op.fmt_operand(f, prec)?;
                }
                Ok(())
            }
        }
    }
}

impl BitAnd for BoolExpr {
    type Output = BoolExpr;
    fn bitand(self, rhs: BoolExpr) -> BoolExpr {
        BoolExpr::And(vec![self, rhs])
    }
}

impl BitOr for BoolExpr {
    type Output = BoolExpr;
    fn bitor(self, rhs: BoolExpr) -> BoolExpr {
        BoolExpr::Or(vec![self, rhs])
    }
}

impl BitXor for BoolExpr {
    type Output = BoolExpr;
    fn bitxor(self, rhs: BoolExpr) -> BoolExpr {
        BoolExpr::Xor(vec![self, rhs])
    }
}

impl Not for BoolExpr {
    type Output = BoolExpr;
    fn not(self) -> BoolExpr {
        BoolExpr::Not(Box::new(self))
    }
}

impl FromStr for BoolExpr {
    type Err = TruthTableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { src: s, pos: 0 };
        let expr = parser.parse_or()?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(expr)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> TruthTableError {
        TruthTableError::Parse { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn parse_binary(
        &mut self,
        op: char,
        build: fn(Vec<BoolExpr>) -> BoolExpr,
        next: fn(&mut Self) -> Result<BoolExpr, TruthTableError>,
    ) -> Result<BoolExpr, TruthTableError> {
        let mut ops = vec![next(self)?];
        while self.eat(op) {
            ops.push(next(self)?);
        }
        Ok(if ops.len() == 1 { ops.pop().unwrap() } else { build(ops) })
    }

    fn parse_or(&mut self) -> Result<BoolExpr, TruthTableError> {
        self.parse_binary('|', BoolExpr::Or, Self::parse_xor)
    }

    fn parse_xor(&mut self) -> Result<BoolExpr, TruthTableError> {
        self.parse_binary('^', BoolExpr::Xor, Self::parse_and)
    }

    fn parse_and(&mut self) -> Result<BoolExpr, TruthTableError> {
        self.parse_binary('&', BoolExpr::And, Self::parse_unary)
    }

    fn parse_unary(&mut self) -> Result<BoolExpr, TruthTableError> {
        if self.eat('!') {
            return Ok(!self.parse_unary()?);
        }
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.parse_or()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some('0') => {
                self.pos += 1;
                Ok(BoolExpr::Const(false))
            }
            Some('1') => {
                self.pos += 1;
                Ok(BoolExpr::Const(true))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let rest = &self.src[self.pos..];
                let len = rest.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(rest.len());
                self.pos += len;
                Ok(BoolExpr::Var(rest[..len].to_string()))
            }
            Some(_) => Err(self.error("expected operand")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BoolExpr {
        s.parse().unwrap()
    }

    #[test]
    fn precedence_and_binds_tighter_than_xor_and_or() {
        assert_eq!(
            p("a | b ^ c & d"),
            BoolExpr::Or(vec![p("a"), BoolExpr::Xor(vec![p("b"), BoolExpr::And(vec![p("c"), p("d")])]),])
        );
        assert_eq!(p("!a & b"), BoolExpr::And(vec![!p("a"), p("b")]));
    }

    #[test]
    fn display_reparses_to_same_tree() {
        for text in ["(A1 & B2 | C) ^ !(x ^ y)", "!!a", "A0&B1^A1&B0", "1 | 0 & q9"] {
            let e = p(text);
            assert_eq!(p(&e.to_string()), e, "{text} -> {e}");
        }
    }

    #[test]
    fn parse_errors_report_position() {
        let err = "A0 & ".parse::<BoolExpr>().unwrap_err();
        assert!(matches!(err, TruthTableError::Parse { position: 5, .. }), "{err:?}");
        assert!("(a".parse::<BoolExpr>().is_err());
        assert!("a b".parse::<BoolExpr>().is_err());
        assert!("_x".parse::<BoolExpr>().is_err());
    }

    #[test]
    fn eval_basics() {
        assert!(!p("x ^ x").eval(&[("x", true)]).unwrap());
        assert!(p("A0 & B0").eval(&[("A0", true), ("B0", true)]).unwrap());
        let err = p("A0 & Q").eval(&[("A0", true)]).unwrap_err();
        assert_eq!(err, TruthTableError::UnboundVariable("Q".into()));
    }

    #[test]
    fn substitute_expands_intermediates() {
        let s3 = p("S2 ^ C1").substitute("S2", &p("A3&B1 ^ A2&B2 ^ A1&B3")).substitute("C1", &p("A1&B2 & A2&B1"));
        let vars: Vec<_> = s3.variables().into_iter().collect();
        assert_eq!(vars, ["A1", "A2", "A3", "B1", "B2", "B3"]);
    }
}
