//! Exact scalar kernel: rationals, valuations, roots, powers, squares,
//! Pell solutions and the two ternary forms `x² + y² + z²`, `x² + y² + 2z²`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default cap on the decimal size of any integer produced by exponentiation.
pub const DEFAULT_MAX_DIGITS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero input")]
    ZeroInput,
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("{0} is a perfect square")]
    SquareInput(BigUint),
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

/// Failure modes of [`rational_pow`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PowError {
    #[error("power is not rational")]
    NotRational,
    #[error("exponentiation outside the nonnegative domain")]
    DomainViolation,
    #[error("result would exceed {0} decimal digits")]
    SizeLimit(u64),
}

/// An exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Rat {
        Rat(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// The integer value, if this rational is an integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn square(&self) -> Rat {
        raw(self.numer() * self.numer(), self.denom() * self.denom())
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Rat {
        let mag = e.unsigned_abs();
        let n = self.0.numer().pow(mag as u32);
        let d = self.0.denom().pow(mag as u32);
        if e >= 0 {
            raw(n, d)
        } else {
            Rat::new(d, n)
        }
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Rat {
        Rat(r)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat::from_int(n)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rat({self})")
    }
}

impl FromStr for Rat {
    type Err = ArithError;

    /// Accepts `p`, `-p`, `p/q` and `-p/q` with decimal digits only.
    fn from_str(s: &str) -> Result<Rat, ArithError> {
        let bad = || ArithError::BadRational(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let digits = |p: &str| -> Result<BigInt, ArithError> {
            if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            p.parse::<BigInt>().map_err(|_| bad())
        };
        let (n, d) = match body.split_once('/') {
            Some((n, d)) => (digits(n)?, digits(d)?),
            None => (digits(body)?, BigInt::one()),
        };
        if d.is_zero() {
            return Err(bad());
        }
        let n = if neg { -n } else { n };
        Ok(Rat::new(n, d))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Euclid's algorithm; much faster than a binary gcd when the operands
/// differ greatly in size.
fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.magnitude().clone(), b.magnitude().clone());
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    BigInt::from(x)
}

fn raw(n: BigInt, d: BigInt) -> Rat {
    Rat(BigRational::new_raw(n, d))
}

fn add_rat(x: &Rat, y: &Rat) -> Rat {
    let (a, b) = (x.numer(), x.denom());
    let (c, d) = (y.numer(), y.denom());
    if b == d {
        let n = a + c;
        let g = gcd(&n, b);
        return if g.is_one() { raw(n, b.clone()) } else { raw(n / &g, b / &g) };
    }
    let g1 = gcd(b, d);
    if g1.is_one() {
        return raw(a * d + c * b, b * d);
    }
    let t = a * (d / &g1) + c * (b / &g1);
    let g2 = gcd(&t, &g1);
    if t.is_zero() {
        return Rat::zero();
    }
    raw(&t / &g2, (b / &g1) * (d / &g2))
}

fn mul_rat(x: &Rat, y: &Rat) -> Rat {
    let (a, b) = (x.numer(), x.denom());
    let (c, d) = (y.numer(), y.denom());
    if a.is_zero() || c.is_zero() {
        return Rat::zero();
    }
    let g1 = gcd(a, d);
    let g2 = gcd(c, b);
    raw((a / &g1) * (c / &g2), (b / &g2) * (d / &g1))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $f:expr) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                $f(self, rhs)
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                $f(&self, &rhs)
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                $f(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_rat);
forward_binop!(Sub, sub, |x: &Rat, y: &Rat| add_rat(x, &-y));
forward_binop!(Mul, mul, mul_rat);
forward_binop!(Div, div, |x: &Rat, y: &Rat| mul_rat(x, &y.recip()));

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// Trial-division primality test.
pub fn is_prime(n: &BigInt) -> bool {
    if n <= &BigInt::one() {
        return false;
    }
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_even() {
        return false;
    }
    let limit = n.sqrt();
    let mut d = BigInt::from(3u32);
    while d <= limit {
        if (n % &d).is_zero() {
            return false;
        }
        d += 2u32;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Exponent of `p` in the absolute value of the nonzero integer `n`; `n` is
/// left holding the cofactor.
fn strip_factor(n: &mut BigInt, p: &BigInt) -> i64 {
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        *n = q;
        e += 1;
    }
}

/// The `p`-adic valuation of a nonzero rational.
pub fn valuation(p: &BigInt, q: &Rat) -> Result<i64, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p.clone()));
    }
    if q.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    Ok(valuation_unchecked(p, q))
}

pub(crate) fn valuation_unchecked(p: &BigInt, q: &Rat) -> i64 {
    let mut n = q.numer().abs();
    let mut d = q.denom().clone();
    strip_factor(&mut n, p) - strip_factor(&mut d, p)
}

/// `(⌊a^{1/n}⌋, exact)` where `exact` holds iff the root is exact.
pub fn int_nth_root(n: u32, a: &BigUint) -> (BigUint, bool) {
    assert!(n >= 1, "root index must be positive");
    let root = a.nth_root(n);
    let exact = &root.pow(n) == a;
    (root, exact)
}

/// Exact `n`-th root of a nonnegative integer, for an index that may not fit
/// in a machine word.
fn exact_root(n: &BigUint, a: &BigUint) -> Option<BigUint> {
    if a.is_zero() || a.is_one() {
        return Some(a.clone());
    }
    // a ≥ 2 has no exact n-th root once 2^n > a.
    let idx = n.to_u32().filter(|&i| u64::from(i) < a.bits())?;
    let (root, exact) = int_nth_root(idx, a);
    exact.then_some(root)
}

fn decimal_digits_estimate(bits: u64) -> u64 {
    // log10(2) < 0.30103
    bits * 30103 / 100000 + 1
}

/// `x^y` for nonnegative rationals, with `0^0 = 1`, under the default size guard.
pub fn rational_pow(x: &Rat, y: &Rat) -> Result<Rat, PowError> {
    rational_pow_bounded(x, y, DEFAULT_MAX_DIGITS)
}

/// `x^y` for nonnegative rationals, refusing results above `max_digits` digits.
pub fn rational_pow_bounded(x: &Rat, y: &Rat, max_digits: u64) -> Result<Rat, PowError> {
    if x.is_negative() || y.is_negative() {
        return Err(PowError::DomainViolation);
    }
    if x.is_zero() {
        return Ok(if y.is_zero() { Rat::one() } else { Rat::zero() });
    }
    if y.is_zero() || x == &Rat::one() {
        return Ok(Rat::one());
    }
    let m = y.numer().magnitude();
    let n = y.denom().magnitude();
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let (rn, rd) = if n.is_one() {
        (num.clone(), den.clone())
    } else {
        match (exact_root(n, num), exact_root(n, den)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(PowError::NotRational),
        }
    };
    let bits = rn.bits().max(rd.bits());
    let e = match m.to_u64() {
        Some(e) => e,
        None => return Err(PowError::SizeLimit(max_digits)),
    };
    if decimal_digits_estimate(bits.saturating_sub(1).saturating_mul(e)) > max_digits {
        return Err(PowError::SizeLimit(max_digits));
    }
    let e = u32::try_from(e).map_err(|_| PowError::SizeLimit(max_digits))?;
    Ok(Rat::new(
        BigInt::from_biguint(Sign::Plus, rn.pow(e)),
        BigInt::from_biguint(Sign::Plus, rd.pow(e)),
    ))
}

fn isqrt_exact(a: &BigInt) -> Option<BigInt> {
    if a.is_negative() {
        return None;
    }
    let r = a.sqrt();
    (&r * &r == *a).then_some(r)
}

/// The nonnegative rational square root of `q`, when `q` is a rational square.
pub fn is_square(q: &Rat) -> Option<Rat> {
    let n = isqrt_exact(q.numer())?;
    let d = isqrt_exact(q.denom())?;
    Some(Rat::new(n, d))
}

pub fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Minimal positive solution of `u² − d·x² = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub d: BigUint,
    pub u: BigUint,
    pub x: BigUint,
}

/// Fundamental solution of the Pell equation via the periodic continued
/// fraction of `√d`.
pub fn pell_fundamental(d: &BigUint) -> Result<PellSolution, ArithError> {
    if d.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    if is_perfect_square(d) {
        return Err(ArithError::SquareInput(d.clone()));
    }
    let d_int = BigInt::from(d.clone());
    let a0 = d_int.sqrt();
    let two_a0 = &a0 * 2u32;

    // Convergents h/k of [a0; a1, a2, ...], with m, q the usual surd state.
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    let mut period = 0u64;
    loop {
        m = &q * &a - &m;
        q = (&d_int - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        period += 1;
        if a == two_a0 {
            break;
        }
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    // h/k is the convergent before the end of the first period; it solves
    // u² − d x² = (−1)^period.
    let (u, x) = if period % 2 == 0 {
        (h, k)
    } else {
        (&h * &h + &d_int * &k * &k, &h * &k * 2u32)
    };
    let sol = PellSolution {
        d: d.clone(),
        u: u.magnitude().clone(),
        x: x.magnitude().clone(),
    };
    debug_assert_eq!(&sol.u * &sol.u, d * &sol.x * &sol.x + 1u32);
    Ok(sol)
}

/// Coefficient of `z²` in the ternary form `x² + y² + δz²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Delta {
    One,
    Two,
}

impl Delta {
    pub const ALL: [Delta; 2] = [Delta::One, Delta::Two];

    pub fn value(self) -> u64 {
        match self {
            Delta::One => 1,
            Delta::Two => 2,
        }
    }
}

impl TryFrom<u8> for Delta {
    type Error = String;
    fn try_from(v: u8) -> Result<Delta, String> {
        match v {
            1 => Ok(Delta::One),
            2 => Ok(Delta::Two),
            other => Err(format!("delta must be 1 or 2, got {other}")),
        }
    }
}

impl From<Delta> for u8 {
    fn from(d: Delta) -> u8 {
        d.value() as u8
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// `n = x² + y² + δ·z²` over nonnegative integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TernaryRep {
    pub n: u64,
    pub delta: Delta,
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl TernaryRep {
    pub fn holds(&self) -> bool {
        let sum = u128::from(self.x).pow(2)
            + u128::from(self.y).pow(2)
            + u128::from(self.delta.value()) * u128::from(self.z).pow(2);
        sum == u128::from(self.n)
    }
}

/// Whether `n` lies in the exceptional set `4^k(8m+7)` (δ = 1) or
/// `4^k(16m+14)` (δ = 2).
pub fn classify_exceptional(n: u64, delta: Delta) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    while n % 4 == 0 {
        n /= 4;
    }
    match delta {
        Delta::One => n % 8 == 7,
        Delta::Two => n % 16 == 14,
    }
}

fn isqrt_u64(n: u64) -> u64 {
    n.sqrt()
}

/// A representation `n = x² + y² + δz²`, or `None` exactly on the exceptional set.
///
/// Scans `z` upward, then `x ≤ y` upward, completing `y` as a square root.
pub fn three_squares_int(n: u64, delta: Delta) -> Option<TernaryRep> {
    if classify_exceptional(n, delta) {
        return None;
    }
    let dv = delta.value();
    for z in 0..=isqrt_u64(n / dv) {
        let rem = n - dv * z * z;
        for x in 0..=isqrt_u64(rem / 2) {
            let y2 = rem - x * x;
            let y = isqrt_u64(y2);
            if y * y == y2 {
                return Some(TernaryRep { n, delta, x, y, z });
            }
        }
    }
    // Unreachable for non-exceptional n by the classical three-squares theorems.
    None
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer((*other).into())))
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer((*other).into())
    }
}
