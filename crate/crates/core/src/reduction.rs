//! Construction, witness generation and verification for the three combined
//! equations: eight rational unknowns, ten squared unknowns, and the
//! prime-power tower over eleven unknowns.
//!
//! Overbarred unknowns are spelled `xb`, `yb`, `zb`. Squares are always
//! emitted as products `e*e`, and every power has a base that is a positive
//! constant or such a product, so evaluation at any rational point stays
//! inside the nonnegative-operand convention.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use thiserror::Error;

use crate::arith::{is_prime, Rat, TernaryRep};
use crate::expr::{eval, free_vars, substitute, Assignment, EvalError, Equation, Expr, Node};
use crate::lemmas::{
    jk_decision, nonneg_witness_pell, three_squares_rational, JkDecision, LemmaError, PellOutcome,
};
use crate::poly::{jk_cached, MPoly, PolyError};

/// The parameter of `f` replaced by the constant `a`.
pub const PARAMETER: &str = "t";

pub const THM1_UNKNOWNS: [&str; 8] = ["x", "y", "z", "xb", "yb", "zb", "u", "v"];
pub const THM2_UNKNOWNS: [&str; 10] = ["w", "x1", "x2", "x3", "y1", "y2", "y3", "z1", "z2", "z3"];
pub const THM3_UNKNOWNS: [&str; 11] =
    ["x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9", "x10"];
pub const DEFAULT_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

const THM1_PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];
const THM2_PRIMES: [u32; 3] = [2, 3, 5];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("variables outside the allowed set: {0:?}")]
    BadInputVars(Vec<String>),
    #[error("bad primes: {0}")]
    BadPrimes(String),
    #[error("({0}, {1}, {2}) does not solve f at the given parameter")]
    NotASolution(u64, u64, u64),
    #[error("this input does not drive the requested construction")]
    WrongMode,
    #[error("witness exceeds the size guard")]
    SizeLimit,
    #[error(transparent)]
    Lemma(#[from] LemmaError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    One,
    Two,
    Three,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Theorem::One => 1,
            Theorem::Two => 2,
            Theorem::Three => 3,
        };
        write!(f, "{n}")
    }
}

#[derive(Debug, Clone)]
enum Source {
    Exponential(Equation),
    Polynomial { q: MPoly, primes: Vec<BigInt> },
}

/// `f(t, x, y, z) = 0` with its parameter, or a polynomial `Q(t, x1…x10)`
/// with its ten primes.
#[derive(Debug, Clone)]
pub struct ReductionInput {
    source: Source,
    a: u64,
}

impl ReductionInput {
    pub fn exponential(f: Equation, a: u64) -> Result<Self, ReductionError> {
        let allowed = [PARAMETER, "x", "y", "z"];
        let bad: Vec<String> =
            f.free_vars().into_iter().filter(|v| !allowed.contains(&v.as_str())).collect();
        if !bad.is_empty() {
            return Err(ReductionError::BadInputVars(bad));
        }
        Ok(ReductionInput { source: Source::Exponential(f), a })
    }

    /// `q` ranges over `t, x1, …, x10`; `primes` defaults to the first ten.
    pub fn polynomial(q: MPoly, a: u64, primes: Option<Vec<u64>>) -> Result<Self, ReductionError> {
        let mut allowed = vec![PARAMETER];
        allowed.extend(&THM3_UNKNOWNS[1..]);
        let bad: Vec<String> = q
            .vars()
            .iter()
            .filter(|v| !allowed.contains(&v.as_str()) && q.degree_in(v) > 0)
            .cloned()
            .collect();
        if !bad.is_empty() {
            return Err(ReductionError::BadInputVars(bad));
        }
        let primes = primes.unwrap_or_else(|| DEFAULT_PRIMES.to_vec());
        if primes.len() != 10 {
            return Err(ReductionError::BadPrimes(format!("expected 10 primes, got {}", primes.len())));
        }
        let primes: Vec<BigInt> = primes.into_iter().map(BigInt::from).collect();
        for (i, p) in primes.iter().enumerate() {
            if !is_prime(p) {
                return Err(ReductionError::BadPrimes(format!("{p} is not prime")));
            }
            if primes[..i].contains(p) {
                return Err(ReductionError::BadPrimes(format!("{p} repeated")));
            }
        }
        Ok(ReductionInput { source: Source::Polynomial { q, primes }, a })
    }

    pub fn parameter(&self) -> u64 {
        self.a
    }

    pub fn primes(&self) -> Option<&[BigInt]> {
        match &self.source {
            Source::Polynomial { primes, .. } => Some(primes),
            Source::Exponential(_) => None,
        }
    }

    fn f(&self) -> Result<&Equation, ReductionError> {
        match &self.source {
            Source::Exponential(f) => Ok(f),
            Source::Polynomial { .. } => Err(ReductionError::WrongMode),
        }
    }

    /// `f(a, x, y, z)` as a single expression `lhs − rhs`.
    fn f_at_parameter(&self) -> Result<Expr, ReductionError> {
        let f = self.f()?.difference();
        let bind = BTreeMap::from([(PARAMETER.to_string(), Expr::nat(self.a))]);
        Ok(substitute(&f, &bind))
    }

    /// Whether `(x, y, z)` solves `f(a, x, y, z) = 0`.
    pub fn is_solution(&self, sol: [u64; 3]) -> Result<bool, ReductionError> {
        let f = self.f_at_parameter()?;
        let env: Assignment = ["x", "y", "z"]
            .iter()
            .zip(sol)
            .map(|(n, v)| (n.to_string(), Rat::from(BigInt::from(v))))
            .collect();
        match eval(&f, &env) {
            Ok(v) => Ok(v.is_zero()),
            Err(EvalError::SizeLimit(_)) => Err(ReductionError::SizeLimit),
            Err(_) => Ok(false),
        }
    }
}

/// An emitted equation with its ordered unknowns.
#[derive(Debug, Clone)]
pub struct ConstructedEquation {
    pub equation: Equation,
    pub unknowns: Vec<String>,
    pub mode: Theorem,
}

impl ConstructedEquation {
    pub fn verify(&self, assignment: &Assignment) -> Result<Verdict, VerifyError> {
        verify(&self.equation, assignment)
    }
}

// ------------------------------------------------------------ expression kit

fn var(name: &str) -> Expr {
    Expr::var(name)
}

fn nat(n: impl Into<BigUint>) -> Expr {
    Expr::nat(n)
}

fn product(factors: impl IntoIterator<Item = Expr>) -> Expr {
    factors.into_iter().reduce(Expr::mul).unwrap_or_else(|| nat(1u32))
}

/// Sum as a balanced tree, keeping depth logarithmic in the term count.
fn balanced_sum(terms: &[Expr]) -> Option<Expr> {
    match terms.len() {
        0 => None,
        1 => Some(terms[0].clone()),
        n => {
            let (l, r) = terms.split_at(n / 2);
            Some(Expr::add(balanced_sum(l)?, balanced_sum(r)?))
        }
    }
}

/// `b^e` using only nonnegative bases: `b`, `b*b`, `(b*b)^k`, `b*(b*b)^k`.
struct PowerCache {
    base: Expr,
    square: Expr,
    cache: HashMap<u32, Expr>,
}

impl PowerCache {
    fn new(base: Expr) -> Self {
        let square = Expr::square(base.clone());
        PowerCache { base, square, cache: HashMap::new() }
    }

    fn power(&mut self, e: u32) -> Expr {
        if let Some(p) = self.cache.get(&e) {
            return p.clone();
        }
        let p = match e {
            0 => nat(1u32),
            1 => self.base.clone(),
            2 => self.square.clone(),
            3 => Expr::mul(self.base.clone(), self.square.clone()),
            _ if e % 2 == 0 => Expr::pow(self.square.clone(), nat(e / 2)),
            _ => Expr::mul(self.base.clone(), Expr::pow(self.square.clone(), nat(e / 2))),
        };
        self.cache.insert(e, p.clone());
        p
    }
}

/// Renders an integer polynomial as an expression, binding each indeterminate.
/// Negative coefficients are gathered into a single subtraction.
pub fn poly_to_expr(p: &MPoly, bindings: &BTreeMap<String, Expr>) -> Expr {
    let mut caches: Vec<Option<PowerCache>> = p
        .vars()
        .iter()
        .map(|v| bindings.get(v).cloned().map(PowerCache::new))
        .collect();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (m, c) in p.terms() {
        let mag = c.magnitude().clone();
        let mut factors = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            if e > 0 {
                let cache = caches[i]
                    .as_mut()
                    .unwrap_or_else(|| panic!("no binding for {}", p.vars()[i]));
                factors.push(cache.power(e));
            }
        }
        let term = if factors.is_empty() {
            nat(mag)
        } else if mag == BigUint::from(1u32) {
            product(factors)
        } else {
            product(std::iter::once(nat(mag)).chain(factors))
        };
        if c.is_negative() {
            neg.push(term);
        } else {
            pos.push(term);
        }
    }
    match (balanced_sum(&pos), balanced_sum(&neg)) {
        (None, None) => nat(0u32),
        (Some(p), None) => p,
        (None, Some(n)) => Expr::sub(nat(0u32), n),
        (Some(p), Some(n)) => Expr::sub(p, n),
    }
}

/// Whether every `Pow` node has a syntactically nonnegative base and exponent.
pub fn powers_are_manifestly_nonnegative(e: &Expr) -> bool {
    fn nonneg(e: &Expr) -> bool {
        match e.node() {
            Node::Nat(_) => true,
            Node::Var(_) | Node::Sub(..) => false,
            Node::Mul(a, b) => a == b || (nonneg(a) && nonneg(b)),
            Node::Add(a, b) => nonneg(a) && nonneg(b),
            Node::Pow(a, _) => nonneg(a),
        }
    }
    let mut ok = true;
    crate::expr::visit_nodes(e, |n| {
        if let Node::Pow(a, b) = n.node() {
            ok &= nonneg(a) && nonneg(b);
        }
    });
    ok
}

/// Whether every variable occurs only as a factor of `v*v`.
pub fn unknowns_only_squared(e: &Expr) -> bool {
    fn go(e: &Expr) -> bool {
        match e.node() {
            Node::Nat(_) => true,
            Node::Var(_) => false,
            Node::Mul(a, b) if matches!((a.node(), b.node()), (Node::Var(x), Node::Var(y)) if x == y) => true,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Pow(a, b) => go(a) && go(b),
        }
    }
    // Shared subterms are revisited; the constructions keep these small.
    go(e)
}

fn sq_var(name: &str) -> Expr {
    Expr::square(var(name))
}

// ----------------------------------------------------------------- Theorem 1

/// `(4s + 2)·sb·sb + 1`.
fn pell_argument(s: &str, sb: &str) -> Expr {
    let lin = Expr::add(Expr::mul(nat(4u32), var(s)), nat(2u32));
    Expr::add(product([lin, var(sb), var(sb)]), nat(1u32))
}

/// Builds `(u·xb·yb·zb·2^{x²}3^{y²}5^{z²}7^{xb²}11^{yb²}13^{zb²} − 1)² + f(a,x,y,z)²
/// + J₃(A_x, A_y, A_z, v)² = 0` with `A_s = (4s+2)·sb² + 1`.
pub fn construct_thm1(input: &ReductionInput) -> Result<ConstructedEquation, ReductionError> {
    let f = input.f_at_parameter()?;
    let exps = ["x", "y", "z", "xb", "yb", "zb"];
    let mut tower = vec![var("u"), var("xb"), var("yb"), var("zb")];
    tower.extend(THM1_PRIMES.iter().zip(exps).map(|(&p, v)| Expr::pow(nat(p), sq_var(v))));
    let first = Expr::sub(product(tower), nat(1u32));

    let j3 = jk_cached(3)?;
    let bindings = BTreeMap::from([
        ("x".to_string(), var("v")),
        ("A1".to_string(), pell_argument("x", "xb")),
        ("A2".to_string(), pell_argument("y", "yb")),
        ("A3".to_string(), pell_argument("z", "zb")),
    ]);
    let j = poly_to_expr(j3, &bindings);

    let lhs = Expr::add(Expr::add(Expr::square(first), Expr::square(f)), Expr::square(j));
    Ok(ConstructedEquation {
        equation: Equation::zero_form(lhs),
        unknowns: THM1_UNKNOWNS.iter().map(|s| s.to_string()).collect(),
        mode: Theorem::One,
    })
}

fn int(v: &BigInt) -> Rat {
    Rat::from_int(v.clone())
}

fn check_solution(input: &ReductionInput, sol: [u64; 3]) -> Result<(), ReductionError> {
    if input.is_solution(sol)? {
        Ok(())
    } else {
        Err(ReductionError::NotASolution(sol[0], sol[1], sol[2]))
    }
}

fn prime_power(p: u32, e: &BigInt) -> Result<Rat, ReductionError> {
    crate::arith::rational_pow(&Rat::from(i64::from(p)), &int(e)).map_err(|_| ReductionError::SizeLimit)
}

/// Rational witness for the eight-unknown equation from a natural solution of `f`.
pub fn witness_thm1(input: &ReductionInput, sol: [u64; 3]) -> Result<Assignment, ReductionError> {
    let constructed = construct_thm1(input)?;
    witness_thm1_for(input, &constructed, sol)
}

/// As [`witness_thm1`], reusing an equation already built by [`construct_thm1`].
pub fn witness_thm1_for(
    input: &ReductionInput,
    constructed: &ConstructedEquation,
    sol: [u64; 3],
) -> Result<Assignment, ReductionError> {
    if constructed.mode != Theorem::One {
        return Err(ReductionError::WrongMode);
    }
    check_solution(input, sol)?;
    let nats: Vec<BigInt> = sol.iter().map(|&v| BigInt::from(v)).collect();
    let mut bars = Vec::new();
    let mut squares = Vec::new();
    for m in &nats {
        match nonneg_witness_pell(m) {
            PellOutcome::Witness(w) => {
                squares.push(int(&(&w.square_root * &w.square_root)));
                bars.push(w.x_bar);
            }
            PellOutcome::Negative(_) => unreachable!("naturals are nonnegative"),
        }
    }
    let mut tower = bars.iter().fold(Rat::one(), |acc, b| acc * int(b));
    for (p, e) in THM1_PRIMES.iter().zip(nats.iter().chain(&bars)) {
        tower = tower * prime_power(*p, &(e * e))?;
    }
    let v = match jk_decision(&squares)? {
        JkDecision::AllSquares { x, .. } => x,
        JkDecision::NotAllSquares { .. } => {
            return Err(ReductionError::Internal("Pell values are not squares".into()));
        }
    };
    let mut a = Assignment::new();
    for (name, val) in ["x", "y", "z"].iter().zip(&nats) {
        a.insert(*name, int(val));
    }
    for (name, val) in ["xb", "yb", "zb"].iter().zip(&bars) {
        a.insert(*name, int(val));
    }
    a.insert("u", tower.recip());
    a.insert("v", v);
    expect_zero(constructed, &a)?;
    Ok(a)
}

fn expect_zero(c: &ConstructedEquation, a: &Assignment) -> Result<(), ReductionError> {
    match c.verify(a) {
        Ok(Verdict::Zero) => Ok(()),
        Ok(other) => Err(ReductionError::Internal(format!("witness verifies to {other}"))),
        Err(VerifyError::SizeLimit(_)) => Err(ReductionError::SizeLimit),
        Err(e) => Err(ReductionError::Internal(e.to_string())),
    }
}

// ----------------------------------------------------------------- Theorem 2

/// `s1*s1 + s2*s2 + δ*(s3*s3)`.
fn ternary_form(prefix: &str, delta: u32) -> Expr {
    let n = |i: u32| format!("{prefix}{i}");
    let third = match delta {
        1 => sq_var(&n(3)),
        d => Expr::mul(nat(d), sq_var(&n(3))),
    };
    Expr::add(Expr::add(sq_var(&n(1)), sq_var(&n(2))), third)
}

/// The `δ`-indexed factors `(w² − (2^X 3^Y 5^Z)²)² + f(a, X, Y, Z)²`, in
/// lexicographic order of `(δ₁, δ₂, δ₃) ∈ {1,2}³`.
pub fn thm2_factors(input: &ReductionInput) -> Result<Vec<([u32; 3], Expr)>, ReductionError> {
    let f = input.f()?.difference();
    let w2 = sq_var("w");
    let mut out = Vec::with_capacity(8);
    for d1 in 1..=2 {
        for d2 in 1..=2 {
            for d3 in 1..=2 {
                let forms = [ternary_form("x", d1), ternary_form("y", d2), ternary_form("z", d3)];
                let tower = product(THM2_PRIMES.iter().zip(&forms).map(|(&p, e)| Expr::pow(nat(p), e.clone())));
                let gap = Expr::sub(w2.clone(), Expr::square(tower));
                let bind = BTreeMap::from([
                    (PARAMETER.to_string(), nat(input.a)),
                    ("x".to_string(), forms[0].clone()),
                    ("y".to_string(), forms[1].clone()),
                    ("z".to_string(), forms[2].clone()),
                ]);
                let fx = substitute(&f, &bind);
                out.push(([d1, d2, d3], Expr::add(Expr::square(gap), Expr::square(fx))));
            }
        }
    }
    Ok(out)
}

/// The product of the eight `δ`-indexed factors, all unknowns occurring squared.
pub fn construct_thm2(input: &ReductionInput) -> Result<ConstructedEquation, ReductionError> {
    let factors = thm2_factors(input)?;
    let lhs = product(factors.into_iter().map(|(_, e)| e));
    Ok(ConstructedEquation {
        equation: Equation::zero_form(lhs),
        unknowns: THM2_UNKNOWNS.iter().map(|s| s.to_string()).collect(),
        mode: Theorem::Two,
    })
}

/// Witness for the ten-unknown product, and the `δ` choices that vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm2Witness {
    pub assignment: Assignment,
    pub deltas: [u32; 3],
}

pub fn witness_thm2(input: &ReductionInput, sol: [u64; 3]) -> Result<Thm2Witness, ReductionError> {
    let constructed = construct_thm2(input)?;
    check_solution(input, sol)?;
    let mut a = Assignment::new();
    let mut deltas = [0u32; 3];
    for (i, (prefix, &n)) in ["x", "y", "z"].iter().zip(&sol).enumerate() {
        let t = three_squares_rational(&Rat::from(BigInt::from(n)))?;
        deltas[i] = t.delta.value() as u32;
        a.insert(format!("{prefix}1"), t.x1);
        a.insert(format!("{prefix}2"), t.x2);
        a.insert(format!("{prefix}3"), t.x3);
    }
    let mut w = Rat::one();
    for (&p, &n) in THM2_PRIMES.iter().zip(&sol) {
        w = w * prime_power(p, &BigInt::from(n))?;
    }
    a.insert("w", w);
    expect_zero(&constructed, &a)?;
    Ok(Thm2Witness { assignment: a, deltas })
}

/// The integer decomposition `n = x² + y² + δz²` used for one coordinate.
pub fn thm2_decomposition(n: u64) -> Option<TernaryRep> {
    crate::arith::Delta::ALL.into_iter().find_map(|d| crate::arith::three_squares_int(n, d))
}

// ----------------------------------------------------------------- Theorem 3

/// Builds `(x0·x10·∏ p_i^{x_i²} − 1)² + Q(a, x1, …, x10)² = 0`.
pub fn construct_thm3(input: &ReductionInput) -> Result<ConstructedEquation, ReductionError> {
    let Source::Polynomial { q, primes } = &input.source else {
        return Err(ReductionError::WrongMode);
    };
    let a = MPoly::constant(&[PARAMETER], BigInt::from(input.a));
    let q_a = q.substitute(PARAMETER, &a);
    let bindings: BTreeMap<String, Expr> =
        THM3_UNKNOWNS[1..].iter().map(|v| (v.to_string(), var(v))).collect();
    let q_expr = poly_to_expr(&q_a, &bindings);

    let mut tower = vec![var("x0"), var("x10")];
    for (p, v) in primes.iter().zip(&THM3_UNKNOWNS[1..]) {
        tower.push(Expr::pow(nat(p.magnitude().clone()), sq_var(v)));
    }
    let first = Expr::sub(product(tower), nat(1u32));
    let lhs = Expr::add(Expr::square(first), Expr::square(q_expr));
    Ok(ConstructedEquation {
        equation: Equation::zero_form(lhs),
        unknowns: THM3_UNKNOWNS.iter().map(|s| s.to_string()).collect(),
        mode: Theorem::Three,
    })
}

// -------------------------------------------------------------- verification

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Zero,
    NonZero(Rat),
    NotRational,
    DomainViolation,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Zero => f.write_str("Zero"),
            Verdict::NonZero(v) => write!(f, "NonZero({v})"),
            Verdict::NotRational => f.write_str("NotRational"),
            Verdict::DomainViolation => f.write_str("DomainViolation"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("intermediate value exceeds {0} decimal digits")]
    SizeLimit(u64),
}

/// Exact evaluation of `lhs − rhs`.
pub fn verify(eq: &Equation, assignment: &Assignment) -> Result<Verdict, VerifyError> {
    match eval(&eq.difference(), assignment) {
        Ok(v) if v.is_zero() => Ok(Verdict::Zero),
        Ok(v) => Ok(Verdict::NonZero(v)),
        Err(EvalError::NotRational) => Ok(Verdict::NotRational),
        Err(EvalError::DomainViolation) => Ok(Verdict::DomainViolation),
        Err(EvalError::UnboundVariable(v)) => Err(VerifyError::UnboundVariable(v)),
        Err(EvalError::SizeLimit(d)) => Err(VerifyError::SizeLimit(d)),
    }
}

/// The free variables of a constructed equation, for unknown-count checks.
pub fn unknowns_of(c: &ConstructedEquation) -> Vec<String> {
    let mut v: Vec<String> = free_vars(&c.equation.lhs).into_iter().collect();
    v.extend(free_vars(&c.equation.rhs));
    v.sort();
    v.dedup();
    v
}
