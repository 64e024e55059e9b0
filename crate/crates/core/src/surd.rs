//! Exact values reachable by the evaluator: rationals, and finite sums
//! `∑ c_i · ∏_p p^{f_{i,p}}` whose surd parts have exponents in (0, 1).
//!
//! Distinct surd monomials are linearly independent over Q, so a sum is
//! rational exactly when only its surd-free part survives. This lets
//! `x^y − y^x` cancel to an exact zero at irrational common values.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{rational_pow_bounded, PowError, Rat};
use crate::expr::EvalError;

/// Largest trial divisor used when factoring a surd base.
const TRIAL_LIMIT: u64 = 1 << 20;

/// `∏ p^f` with every `f` in (0, 1).
type Surd = BTreeMap<BigUint, Rat>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Value {
    Exact(Rat),
    Mixed(BTreeMap<Surd, Rat>),
}

fn normalize(mut terms: BTreeMap<Surd, Rat>) -> Value {
    terms.retain(|_, c| !c.is_zero());
    match terms.len() {
        0 => Value::Exact(Rat::zero()),
        1 if terms.keys().next().unwrap().is_empty() => {
            Value::Exact(terms.into_values().next().unwrap())
        }
        _ => Value::Mixed(terms),
    }
}

fn into_terms(v: Value) -> BTreeMap<Surd, Rat> {
    match v {
        Value::Exact(r) => BTreeMap::from([(Surd::new(), r)]),
        Value::Mixed(t) => t,
    }
}

fn split_exponent(t: &Rat) -> (BigInt, Rat) {
    let fl = t.as_big_rational().floor().to_integer();
    let frac = t - &Rat::from_int(fl.clone());
    (fl, frac)
}

fn surd_mul(a: &Surd, b: &Surd) -> (Rat, Surd) {
    let mut out = a.clone();
    let mut coeff = Rat::one();
    for (p, f) in b {
        let sum = out.get(p).map(|g| g + f).unwrap_or_else(|| f.clone());
        if sum >= 1 {
            coeff = coeff * Rat::from_int(BigInt::from(p.clone()));
            let rest = sum - Rat::one();
            if rest.is_zero() {
                out.remove(p);
            } else {
                out.insert(p.clone(), rest);
            }
        } else {
            out.insert(p.clone(), sum);
        }
    }
    (coeff, out)
}

impl Value {
    pub(crate) fn into_rat(self) -> Result<Rat, EvalError> {
        match self {
            Value::Exact(r) => Ok(r),
            Value::Mixed(_) => Err(EvalError::NotRational),
        }
    }

    pub(crate) fn add(self, other: Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a + b),
            (a, b) => {
                let mut terms = into_terms(a);
                for (k, c) in into_terms(b) {
                    let entry = terms.entry(k).or_default();
                    *entry = &*entry + &c;
                }
                normalize(terms)
            }
        }
    }

    pub(crate) fn neg(self) -> Value {
        match self {
            Value::Exact(a) => Value::Exact(-a),
            Value::Mixed(t) => Value::Mixed(t.into_iter().map(|(k, c)| (k, -c)).collect()),
        }
    }

    pub(crate) fn sub(self, other: Value) -> Value {
        self.add(other.neg())
    }

    pub(crate) fn mul(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a * b),
            (a, b) => {
                let (ta, tb) = (into_terms(a.clone()), into_terms(b.clone()));
                let mut terms: BTreeMap<Surd, Rat> = BTreeMap::new();
                for (ka, ca) in &ta {
                    for (kb, cb) in &tb {
                        let (c, k) = surd_mul(ka, kb);
                        let entry = terms.entry(k).or_default();
                        *entry = &*entry + &(c * ca * cb);
                    }
                }
                normalize(terms)
            }
        }
    }

    pub(crate) fn square(&self) -> Value {
        match self {
            Value::Exact(a) => Value::Exact(a.square()),
            v => v.mul(v),
        }
    }

    /// Sign of a value, when it is decidable without approximation.
    fn sign(&self) -> Option<Sign> {
        match self {
            Value::Exact(r) => Some(r.numer().sign()),
            Value::Mixed(t) if t.len() == 1 => t.values().next().map(|c| c.numer().sign()),
            Value::Mixed(_) => None,
        }
    }

    /// `self^exponent` under the nonnegative-operand convention.
    pub(crate) fn pow(&self, exponent: &Value, max_digits: u64) -> Result<Value, EvalError> {
        let (sb, se) = (self.sign(), exponent.sign());
        if sb == Some(Sign::Minus) || se == Some(Sign::Minus) {
            return Err(EvalError::DomainViolation);
        }
        let y = match exponent {
            Value::Exact(y) => y,
            Value::Mixed(_) => {
                return match self {
                    Value::Exact(b) if b.is_zero() || b == &Rat::one() => Ok(self.clone()),
                    _ => Err(EvalError::NotRational),
                };
            }
        };
        match self {
            Value::Exact(x) => match rational_pow_bounded(x, y, max_digits) {
                Ok(r) => Ok(Value::Exact(r)),
                Err(PowError::NotRational) => surd_pow(x, &Surd::new(), y, max_digits),
                Err(e) => Err(e.into()),
            },
            Value::Mixed(t) if t.len() == 1 => {
                let (k, c) = t.iter().next().unwrap();
                surd_pow(c, k, y, max_digits)
            }
            // The sign of a sum of several surds is not decided exactly.
            Value::Mixed(_) => Err(EvalError::NotRational),
        }
    }
}

/// Prime factorization by trial division, if it completes within the limit.
fn factor(n: &BigUint) -> Option<Vec<(BigUint, i64)>> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let db = BigUint::from(d);
        if &db * &db > n {
            break;
        }
        let mut e = 0i64;
        loop {
            let (q, r) = n.div_rem(&db);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((db, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigUint::one() {
        let bound = BigUint::from(TRIAL_LIMIT) * BigUint::from(TRIAL_LIMIT);
        if n > bound && !BigUint::from(d).pow(2).gt(&n) {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

/// `(c · surd)^y` for `c > 0` and rational `y ≥ 0`.
fn surd_pow(c: &Rat, surd: &Surd, y: &Rat, max_digits: u64) -> Result<Value, EvalError> {
    let num = factor(c.numer().magnitude()).ok_or(EvalError::NotRational)?;
    let den = factor(c.denom().magnitude()).ok_or(EvalError::NotRational)?;
    let mut exps: BTreeMap<BigUint, Rat> = surd.clone();
    for (p, e) in num {
        let entry = exps.entry(p).or_default();
        *entry = &*entry + &Rat::from(e);
    }
    for (p, e) in den {
        let entry = exps.entry(p).or_default();
        *entry = &*entry - &Rat::from(e);
    }
    let mut coeff = Rat::one();
    let mut out = Surd::new();
    let mut digits = 0f64;
    for (p, e) in exps {
        let t = e * y;
        let (whole, frac) = split_exponent(&t);
        if !whole.is_zero() {
            let w = whole.abs().to_u32().ok_or(EvalError::SizeLimit(max_digits))?;
            digits += f64::from(w) * (p.bits() as f64 - 1.0) * std::f64::consts::LOG10_2;
            if digits > max_digits as f64 {
                return Err(EvalError::SizeLimit(max_digits));
            }
            let pw = Rat::from_int(BigInt::from_biguint(Sign::Plus, p.pow(w)));
            coeff = if whole.is_negative() { coeff / pw } else { coeff * pw };
        }
        if !frac.is_zero() {
            out.insert(p, frac);
        }
    }
    Ok(normalize(BTreeMap::from([(out, coeff)])))
}
