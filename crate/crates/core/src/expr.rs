//! Exponential diophantine expressions: syntax trees, parsing, printing,
//! substitution and exact evaluation.
//!
//! Subtrees are reference counted, so large constructed equations can share
//! repeated pieces (a squared factor, a recurring argument) as a DAG. Printing
//! and equality look through the sharing; evaluation computes every shared
//! node once.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{PowError, Rat, DEFAULT_MAX_DIGITS};
use crate::surd::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Nat(BigUint),
    Var(String),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Pow(Expr, Expr),
}

/// A shared handle to an expression node.
#[derive(Clone, Eq)]
pub struct Expr(Rc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        Rc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    fn addr(&self) -> usize {
        Rc::as_ptr(&self.0) as usize
    }

    fn shared(&self) -> bool {
        Rc::strong_count(&self.0) > 1
    }

    pub fn nat(n: impl Into<BigUint>) -> Expr {
        Expr(Rc::new(Node::Nat(n.into())))
    }

    /// A variable. Panics on a name outside `[a-z][a-z0-9_]*`.
    pub fn var(name: &str) -> Expr {
        assert!(is_var_name(name), "invalid variable name {name:?}");
        Expr(Rc::new(Node::Var(name.to_string())))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr(Rc::new(Node::Add(a, b)))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr(Rc::new(Node::Sub(a, b)))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr(Rc::new(Node::Mul(a, b)))
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        Expr(Rc::new(Node::Pow(a, b)))
    }

    /// `e * e`, sharing the operand.
    pub fn square(e: Expr) -> Expr {
        Expr::mul(e.clone(), e)
    }

    fn precedence(&self) -> u8 {
        match self.node() {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) => 2,
            Node::Pow(..) => 3,
            Node::Nat(_) | Node::Var(_) => 4,
        }
    }
}

pub fn is_var_name(name: &str) -> bool {
    let mut bytes = name.bytes();
    matches!(bytes.next(), Some(b'a'..=b'z'))
        && bytes.all(|b| matches!(b, b'a'..=b'z' | b'0'..=b'9' | b'_'))
}

// ---------------------------------------------------------------- printing

fn write_child(out: &mut String, e: &Expr, min_prec: u8) {
    if e.precedence() < min_prec {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    use std::fmt::Write;
    match e.node() {
        Node::Nat(n) => write!(out, "{n}").unwrap(),
        Node::Var(v) => out.push_str(v),
        Node::Add(a, b) | Node::Sub(a, b) => {
            write_child(out, a, 1);
            out.push_str(if matches!(e.node(), Node::Add(..)) { " + " } else { " - " });
            write_child(out, b, 2);
        }
        Node::Mul(a, b) => {
            write_child(out, a, 2);
            out.push('*');
            write_child(out, b, 3);
        }
        Node::Pow(a, b) => {
            write_child(out, a, 4);
            out.push('^');
            write_child(out, b, 3);
        }
    }
}

/// Canonical rendering with the fewest parentheses that re-parse to the same tree.
pub fn print(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

// ----------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: expected {}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
}

#[derive(PartialEq, Eq, Hash)]
enum Key {
    Nat(BigUint),
    Var(String),
    Op(u8, usize, usize),
}

/// Identical subterms of the input come back as one shared node.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    interned: HashMap<Key, Expr>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0, interned: HashMap::new() }
    }

    fn intern(&mut self, node: Node) -> Expr {
        let key = match &node {
            Node::Nat(n) => Key::Nat(n.clone()),
            Node::Var(v) => Key::Var(v.clone()),
            Node::Add(a, b) => Key::Op(0, a.addr(), b.addr()),
            Node::Sub(a, b) => Key::Op(1, a.addr(), b.addr()),
            Node::Mul(a, b) => Key::Op(2, a.addr(), b.addr()),
            Node::Pow(a, b) => Key::Op(3, a.addr(), b.addr()),
        };
        self.interned.entry(key).or_insert_with(|| Expr(Rc::new(node))).clone()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&mut self, expected: &[&str]) -> ParseError {
        self.skip_ws();
        ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = self.intern(Node::Add(acc, rhs));
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = self.intern(Node::Sub(acc, rhs));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let rhs = self.factor()?;
            acc = self.intern(Node::Mul(acc, rhs));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.factor()?;
            Ok(self.intern(Node::Pow(base, exponent)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(self.intern(Node::Nat(digits.parse::<BigUint>().unwrap())))
            }
            Some(b'a'..=b'z') => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && matches!(self.src[self.pos], b'a'..=b'z' | b'0'..=b'9' | b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(self.intern(Node::Var(name.to_string())))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error(&["\")\"", "operator"]));
                }
                Ok(inner)
            }
            _ => Err(self.error(&["number", "variable", "\"(\""])),
        }
    }

    fn finish(&mut self, expected: &[&str]) -> Result<(), ParseError> {
        if self.peek().is_some() {
            Err(self.error(expected))
        } else {
            Ok(())
        }
    }
}

/// Parses a single expression.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.finish(&["operator", "end of input"])?;
    Ok(e)
}

impl FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Expr, ParseError> {
        parse(s)
    }
}

/// `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Equation {
    pub fn new(lhs: Expr, rhs: Expr) -> Equation {
        Equation { lhs, rhs }
    }

    /// `e = 0`.
    pub fn zero_form(e: Expr) -> Equation {
        Equation::new(e, Expr::nat(0u32))
    }

    /// Parses `expr = expr`. A bare expression is read as `expr = 0`.
    pub fn parse(text: &str) -> Result<Equation, ParseError> {
        let mut p = Parser::new(text);
        let lhs = p.expr()?;
        if p.peek().is_none() {
            return Ok(Equation::zero_form(lhs));
        }
        if !p.eat(b'=') {
            return Err(p.error(&["operator", "\"=\""]));
        }
        let rhs = p.expr()?;
        p.finish(&["operator", "end of input"])?;
        Ok(Equation::new(lhs, rhs))
    }

    /// The canonical form `lhs − rhs` whose vanishing is the equation.
    pub fn difference(&self) -> Expr {
        match self.rhs.node() {
            Node::Nat(n) if n == &BigUint::from(0u32) => self.lhs.clone(),
            _ => Expr::sub(self.lhs.clone(), self.rhs.clone()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut vars = free_vars(&self.lhs);
        vars.extend(free_vars(&self.rhs));
        vars
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl FromStr for Equation {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Equation, ParseError> {
        Equation::parse(s)
    }
}

// ------------------------------------------------------ structural queries

fn for_each_node(e: &Expr, seen: &mut BTreeSet<usize>, visit: &mut dyn FnMut(&Expr)) {
    if e.shared() && !seen.insert(e.addr()) {
        return;
    }
    visit(e);
    match e.node() {
        Node::Nat(_) | Node::Var(_) => {}
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Pow(a, b) => {
            for_each_node(a, seen, visit);
            for_each_node(b, seen, visit);
        }
    }
}

pub fn free_vars(e: &Expr) -> BTreeSet<String> {
    let mut vars = BTreeSet::new();
    for_each_node(e, &mut BTreeSet::new(), &mut |n| {
        if let Node::Var(v) = n.node() {
            vars.insert(v.clone());
        }
    });
    vars
}

/// Visits every distinct node once.
pub fn visit_nodes(e: &Expr, mut visit: impl FnMut(&Expr)) {
    for_each_node(e, &mut BTreeSet::new(), &mut visit);
}

/// Simultaneous substitution of variables by expressions.
pub fn substitute(e: &Expr, bindings: &BTreeMap<String, Expr>) -> Expr {
    fn go(e: &Expr, b: &BTreeMap<String, Expr>, memo: &mut HashMap<usize, Expr>) -> Expr {
        if e.shared() {
            if let Some(done) = memo.get(&e.addr()) {
                return done.clone();
            }
        }
        let out = match e.node() {
            Node::Nat(_) => e.clone(),
            Node::Var(v) => b.get(v).cloned().unwrap_or_else(|| e.clone()),
            Node::Add(x, y) => Expr::add(go(x, b, memo), go(y, b, memo)),
            Node::Sub(x, y) => Expr::sub(go(x, b, memo), go(y, b, memo)),
            Node::Mul(x, y) => Expr::mul(go(x, b, memo), go(y, b, memo)),
            Node::Pow(x, y) => Expr::pow(go(x, b, memo), go(y, b, memo)),
        };
        if e.shared() {
            memo.insert(e.addr(), out.clone());
        }
        out
    }
    if bindings.is_empty() {
        return e.clone();
    }
    go(e, bindings, &mut HashMap::new())
}

// -------------------------------------------------------------- evaluation

/// Candidate values for the free variables of an expression.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(BTreeMap<String, Rat>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: Rat) -> Option<Rat> {
        self.0.insert(name.into(), value)
    }

    pub fn get(&self, name: &str) -> Option<&Rat> {
        self.0.get(name)
    }

    pub fn with(mut self, name: impl Into<String>, value: Rat) -> Assignment {
        self.insert(name, value);
        self
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rat)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Assignment, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("assignment serializes")
    }
}

impl FromIterator<(String, Rat)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (String, Rat)>>(iter: I) -> Assignment {
        Assignment(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("value is not rational")]
    NotRational,
    #[error("exponentiation with a negative base or exponent")]
    DomainViolation,
    #[error("intermediate value exceeds {0} decimal digits")]
    SizeLimit(u64),
}

impl EvalError {
    fn severity(&self) -> u8 {
        match self {
            EvalError::UnboundVariable(_) => 4,
            EvalError::DomainViolation => 3,
            EvalError::NotRational => 2,
            EvalError::SizeLimit(_) => 1,
        }
    }
}

impl From<PowError> for EvalError {
    fn from(e: PowError) -> EvalError {
        match e {
            PowError::NotRational => EvalError::NotRational,
            PowError::DomainViolation => EvalError::DomainViolation,
            PowError::SizeLimit(d) => EvalError::SizeLimit(d),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Abort when a power would exceed this many decimal digits.
    pub max_digits: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { max_digits: DEFAULT_MAX_DIGITS }
    }
}

type EvalResult = Result<Value, EvalError>;

struct Evaluator<'a> {
    assignment: &'a Assignment,
    options: EvalOptions,
    memo: HashMap<usize, EvalResult>,
}

impl Evaluator<'_> {
    fn eval(&mut self, e: &Expr) -> EvalResult {
        if e.shared() {
            if let Some(v) = self.memo.get(&e.addr()) {
                return v.clone();
            }
        }
        let v = self.eval_node(e);
        if e.shared() {
            self.memo.insert(e.addr(), v.clone());
        }
        v
    }

    fn eval_node(&mut self, e: &Expr) -> EvalResult {
        let (a, b) = match e.node() {
            Node::Nat(n) => return Ok(Value::Exact(Rat::from_int(num_bigint::BigInt::from(n.clone())))),
            Node::Var(v) => {
                return self
                    .assignment
                    .get(v)
                    .cloned()
                    .map(Value::Exact)
                    .ok_or_else(|| EvalError::UnboundVariable(v.clone()))
            }
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Pow(a, b) => (a, b),
        };
        // Both operands are always evaluated; the more severe failure wins.
        let (va, vb) = if a.ptr_eq(b) {
            let v = self.eval(a);
            (v.clone(), v)
        } else {
            (self.eval(a), self.eval(b))
        };
        let (x, y) = match (va, vb) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(ea), Err(eb)) => {
                return Err(if eb.severity() > ea.severity() { eb } else { ea });
            }
            (Err(err), _) | (_, Err(err)) => return Err(err),
        };
        Ok(match e.node() {
            Node::Add(..) => x.add(y),
            Node::Sub(..) => x.sub(y),
            Node::Mul(..) => {
                if a.ptr_eq(b) {
                    x.square()
                } else {
                    x.mul(&y)
                }
            }
            Node::Pow(..) => x.pow(&y, self.options.max_digits)?,
            Node::Nat(_) | Node::Var(_) => unreachable!(),
        })
    }
}

/// Exact bottom-up evaluation with the default size guard.
///
/// Irrational powers are carried exactly as surds, so they may cancel; the
/// result is `NotRational` when the final value (or an exponent) is irrational
/// or when a surd cannot be represented exactly.
pub fn eval(e: &Expr, assignment: &Assignment) -> Result<Rat, EvalError> {
    eval_with(e, assignment, EvalOptions::default())
}

pub fn eval_with(e: &Expr, assignment: &Assignment, options: EvalOptions) -> Result<Rat, EvalError> {
    if let Some(missing) = free_vars(e).into_iter().find(|v| assignment.get(v).is_none()) {
        return Err(EvalError::UnboundVariable(missing));
    }
    Evaluator { assignment, options, memo: HashMap::new() }.eval(e)?.into_rat()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parser_shares_repeated_subterms() {
        let e = parse("(x + 1)*(x + 1) + 2^(x + 1)").unwrap();
        let Node::Add(l, r) = e.node() else { panic!() };
        let (Node::Mul(a, b), Node::Pow(_, c)) = (l.node(), r.node()) else { panic!() };
        assert!(a.ptr_eq(b) && a.ptr_eq(c));
    }
    use proptest::prelude::*;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn assign(pairs: &[(&str, &str)]) -> Assignment {
        pairs.iter().map(|(k, v)| (k.to_string(), r(v))).collect()
    }

    const PAPER_EXAMPLE: &str = "x^(2^(y^x)) + y^(x+3*y) - (5*z^(2*x^2) + x*y*z + 4)";

    #[test]
    fn precedence_and_associativity() {
        let e = p("x^2^y + 3*y - 5");
        let expected = Expr::sub(
            Expr::add(
                Expr::pow(Expr::var("x"), Expr::pow(Expr::nat(2u32), Expr::var("y"))),
                Expr::mul(Expr::nat(3u32), Expr::var("y")),
            ),
            Expr::nat(5u32),
        );
        assert_eq!(e, expected);
        assert_eq!(p("a - b - c"), Expr::sub(Expr::sub(Expr::var("a"), Expr::var("b")), Expr::var("c")));
    }

    #[test]
    fn paper_example_shape() {
        let e = p(PAPER_EXAMPLE);
        let Node::Sub(left, right) = e.node() else { panic!("top is not Sub") };
        let Node::Add(first, _) = left.node() else { panic!() };
        assert_eq!(*first, p("x^2^y^x"));
        assert_eq!(*right, p("5*z^(2*x^2) + x*y*z + 4"));
        assert_eq!(parse(&print(&e)).unwrap(), e);
        assert_eq!(print(&e), "x^2^y^x + y^(x + 3*y) - (5*z^(2*x^2) + x*y*z + 4)");
    }

    #[test]
    fn parse_errors() {
        let err = parse("2^").unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(err.expected.contains(&"variable".to_string()));
        assert_eq!(parse("(x + 1").unwrap_err().offset, 6);
        assert_eq!(parse("x y").unwrap_err().offset, 2);
        assert_eq!(parse("").unwrap_err().offset, 0);
        assert_eq!(parse("X").unwrap_err().offset, 0);
        assert_eq!(parse("x + -1").unwrap_err().offset, 4);
    }

    #[test]
    fn printing() {
        let e = Expr::pow(Expr::var("x"), Expr::nat(2u32));
        assert_eq!(print(&e), "x^2");
        let e = Expr::mul(
            Expr::nat(5u32),
            Expr::pow(
                Expr::var("z"),
                Expr::mul(Expr::nat(2u32), Expr::pow(Expr::var("x"), Expr::nat(2u32))),
            ),
        );
        assert_eq!(print(&e), "5*z^(2*x^2)");
        assert_eq!(print(&p("(a+b)+(c-d)")), "a + b + (c - d)");
        assert_eq!(print(&p("(a^b)^c")), "(a^b)^c");
        assert_eq!(print(&p("a*(b*c)")), "a*(b*c)");
        assert_eq!(print(&p("a*b^c")), "a*b^c");
    }

    #[test]
    fn equations() {
        let eq = Equation::parse("t - x - y - z = 0").unwrap();
        assert_eq!(eq.to_string(), "t - x - y - z = 0");
        assert_eq!(eq.free_vars().len(), 4);
        let bare = Equation::parse("(x+2)*(y+2) - t").unwrap();
        assert_eq!(bare.rhs, Expr::nat(0u32));
        let eq = Equation::parse("x^y = y^x").unwrap();
        assert_eq!(eq.difference(), p("x^y - y^x"));
        assert_eq!(Equation::parse("x = ").unwrap_err().offset, 4);
        assert!(Equation::parse("x = y = z").is_err());
    }

    #[test]
    fn free_variables() {
        assert_eq!(free_vars(&p("x^2 + y")), ["x", "y"].map(String::from).into());
        assert!(free_vars(&p("7")).is_empty());
        assert_eq!(free_vars(&p(PAPER_EXAMPLE)), ["x", "y", "z"].map(String::from).into());
    }

    #[test]
    fn substitution() {
        let b: BTreeMap<_, _> = [("x".to_string(), p("z^2"))].into();
        assert_eq!(substitute(&p("x + y"), &b), p("z^2 + y"));
        assert_eq!(substitute(&p("x"), &BTreeMap::new()), p("x"));
        let b: BTreeMap<_, _> = [("x".to_string(), p("x1^2 + x2^2 + 1*x3^2"))].into();
        assert_eq!(substitute(&p("t - x*y"), &b), p("t - (x1^2 + x2^2 + 1*x3^2)*y"));
        // Simultaneous, not sequential.
        let b: BTreeMap<_, _> = [("x".to_string(), p("y")), ("y".to_string(), p("x"))].into();
        assert_eq!(substitute(&p("x - y"), &b), p("y - x"));
    }

    #[test]
    fn evaluation_semantics() {
        assert_eq!(eval(&p("x^y - y^x"), &assign(&[("x", "2"), ("y", "4")])), Ok(Rat::zero()));
        assert_eq!(eval(&p("x^x"), &assign(&[("x", "3/2")])), Err(EvalError::NotRational));
        assert_eq!(
            eval(&p("x^y"), &assign(&[("x", "-1"), ("y", "2/3")])),
            Err(EvalError::DomainViolation)
        );
        assert_eq!(eval(&p("0^0"), &Assignment::new()), Ok(Rat::one()));
        assert_eq!(
            eval(&p("x + q"), &assign(&[("x", "1")])),
            Err(EvalError::UnboundVariable("q".into()))
        );
    }

    #[test]
    fn domain_violation_is_not_short_circuited() {
        let a = assign(&[("x", "-1"), ("h", "1/2")]);
        assert_eq!(eval(&p("0*x^2"), &a), Err(EvalError::DomainViolation));
        assert_eq!(eval(&p("2^h*(0*x^2)"), &a), Err(EvalError::DomainViolation));
        assert_eq!(eval(&p("(0*x^2)*2^h"), &a), Err(EvalError::DomainViolation));
        assert_eq!(eval(&p("2^h"), &a), Err(EvalError::NotRational));
        // Irrational intermediates are exact, so they can vanish or cancel.
        assert_eq!(eval(&p("0*2^h"), &a), Ok(Rat::zero()));
        assert_eq!(eval(&p("2^h*2^h"), &a), Ok(r("2")));
        assert_eq!(eval(&p("8^h - 2*2^h"), &a), Ok(Rat::zero()));
        assert_eq!(eval(&p("3^(2^h)"), &a), Err(EvalError::NotRational));
    }

    #[test]
    fn size_guard() {
        let opts = EvalOptions { max_digits: 1000 };
        assert_eq!(
            eval_with(&p("10^10^4"), &Assignment::new(), opts),
            Err(EvalError::SizeLimit(1000))
        );
        assert!(eval_with(&p("10^999"), &Assignment::new(), opts).is_ok());
        assert_eq!(
            eval(&p("x^(2^(y^x))"), &assign(&[("x", "3"), ("y", "3")])),
            Err(EvalError::SizeLimit(DEFAULT_MAX_DIGITS))
        );
    }

    #[test]
    fn shared_subterms_evaluate_once_and_print_fully() {
        let base = p("x + 1");
        let sq = Expr::square(base);
        assert_eq!(print(&sq), "(x + 1)*(x + 1)");
        assert_eq!(eval(&sq, &assign(&[("x", "-3/2")])), Ok(r("1/4")));
        assert_eq!(parse(&print(&sq)).unwrap(), sq);
    }

    #[test]
    fn euler_family_small() {
        for n in 1..=4i64 {
            let base = Rat::new(n + 1, n);
            let x = base.powi(n);
            let y = base.powi(n + 1);
            let a = Assignment::new().with("x", x.clone()).with("y", y.clone());
            assert!(x < y);
            assert_eq!(eval(&p("x^y - y^x"), &a), Ok(Rat::zero()));
        }
    }

    #[test]
    fn assignment_json() {
        let a = Assignment::from_json(r#"{"x": "3/2", "u": "-7/45"}"#).unwrap();
        assert_eq!(a.get("u"), Some(&r("-7/45")));
        let back = Assignment::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
        assert!(Assignment::from_json(r#"{"x": "1/0"}"#).is_err());
    }

    pub(crate) fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u32..1000).prop_map(Expr::nat),
            prop::sample::select(vec!["x", "y", "z", "x1", "b_2"]).prop_map(Expr::var),
        ];
        leaf.prop_recursive(6, 64, 2, |inner| {
            (0u8..4, inner.clone(), inner).prop_map(|(op, a, b)| match op {
                0 => Expr::add(a, b),
                1 => Expr::sub(a, b),
                2 => Expr::mul(a, b),
                _ => Expr::pow(a, b),
            })
        })
    }

    fn arb_sub_free() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u32..4).prop_map(Expr::nat),
            prop::sample::select(vec!["x", "y"]).prop_map(Expr::var),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            (0u8..3, inner.clone(), inner).prop_map(|(op, a, b)| match op {
                0 => Expr::add(a, b),
                1 => Expr::mul(a, b),
                _ => Expr::pow(a, b),
            })
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(e in arb_expr()) {
            prop_assert_eq!(parse(&print(&e)).unwrap(), e);
        }

        #[test]
        fn eval_is_compositional(a in arb_sub_free(), b in arb_sub_free(), x in 0i64..3, y in 0i64..3) {
            let env = Assignment::new().with("x", x.into()).with("y", y.into());
            let opts = EvalOptions { max_digits: 2000 };
            if let (Ok(va), Ok(vb)) = (eval_with(&a, &env, opts), eval_with(&b, &env, opts)) {
                prop_assert_eq!(eval_with(&Expr::add(a.clone(), b.clone()), &env, opts), Ok(&va + &vb));
                prop_assert_eq!(eval_with(&Expr::sub(a.clone(), b.clone()), &env, opts), Ok(&va - &vb));
                prop_assert_eq!(eval_with(&Expr::mul(a, b), &env, opts), Ok(va * vb));
            }
        }

        #[test]
        fn naturals_stay_natural(e in arb_sub_free(), x in 0i64..4, y in 0i64..4) {
            let env = Assignment::new().with("x", x.into()).with("y", y.into());
            if let Ok(v) = eval_with(&e, &env, EvalOptions { max_digits: 2000 }) {
                prop_assert!(v.is_integer() && !v.is_negative());
            }
        }
    }
}
