//! Certificates, witnesses and decisions for the integrality, Pell,
//! relation-combining and ternary-form lemmas.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{
    is_prime, is_square, pell_fundamental, three_squares_int, valuation_unchecked, Delta, Rat,
};
use crate::poly::{jk_cached, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("prime {0} listed twice")]
    DuplicatePrime(BigInt),
    #[error("{primes} primes but {exponents} exponents")]
    LengthMismatch { primes: usize, exponents: usize },
    #[error("claimed value is zero")]
    ZeroClaim,
    #[error("argument {0} is zero")]
    ZeroArgument(usize),
    #[error("negative input {0}")]
    NegativeInput(Rat),
    #[error("value too large for desk-scale computation")]
    TooLarge,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

// ------------------------------------------------------- prime-power products

/// `∏ p_i^{α_i}` for distinct primes `p_i` and rational exponents `α_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerProduct {
    primes: Vec<BigInt>,
    exponents: Vec<Rat>,
}

impl PrimePowerProduct {
    pub fn new(primes: Vec<BigInt>, exponents: Vec<Rat>) -> Result<Self, LemmaError> {
        if primes.len() != exponents.len() {
            return Err(LemmaError::LengthMismatch { primes: primes.len(), exponents: exponents.len() });
        }
        for (i, p) in primes.iter().enumerate() {
            if !is_prime(p) {
                return Err(LemmaError::NotPrime(p.clone()));
            }
            if primes[..i].contains(p) {
                return Err(LemmaError::DuplicatePrime(p.clone()));
            }
        }
        Ok(PrimePowerProduct { primes, exponents })
    }

    pub fn from_u64(primes: &[u64], exponents: Vec<Rat>) -> Result<Self, LemmaError> {
        Self::new(primes.iter().map(|&p| BigInt::from(p)).collect(), exponents)
    }

    pub fn primes(&self) -> &[BigInt] {
        &self.primes
    }

    pub fn exponents(&self) -> &[Rat] {
        &self.exponents
    }

    /// The same primes with every exponent squared.
    pub fn squared_exponents(&self) -> PrimePowerProduct {
        PrimePowerProduct {
            primes: self.primes.clone(),
            exponents: self.exponents.iter().map(Rat::square).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductValue {
    Rational(Rat),
    Irrational,
}

/// The exact value of the product, which is rational iff every exponent is an integer.
pub fn prime_power_product_value(pp: &PrimePowerProduct) -> Result<ProductValue, LemmaError> {
    let mut value = Rat::one();
    for (p, alpha) in pp.primes.iter().zip(&pp.exponents) {
        let Some(e) = alpha.to_integer() else { return Ok(ProductValue::Irrational) };
        let e = e.to_i64().filter(|e| e.unsigned_abs() <= 1 << 20).ok_or(LemmaError::TooLarge)?;
        value = value * Rat::from_int(p.clone()).powi(e);
    }
    Ok(ProductValue::Rational(value))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    /// A product of positive reals is positive.
    NotPositive,
    /// `ν_p(claimed^n) ≠ n·α` at the listed prime.
    ValuationMismatch { prime: BigInt, expected: Rat, found: BigInt },
    /// The claimed value has a prime factor outside the list.
    ForeignFactor(BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateVerdict {
    Accept,
    Reject(RejectReason),
}

/// Checks `claimed = ∏ p_i^{α_i}` through valuations: with `n` clearing every
/// exponent denominator, `claimed^n = ∏ p_i^{nα_i}` forces
/// `ν_{p_i}(claimed^n) = nα_i` and no other prime in `claimed`.
pub fn integrality_certificate(
    pp: &PrimePowerProduct,
    claimed: &Rat,
) -> Result<CertificateVerdict, LemmaError> {
    if claimed.is_zero() {
        return Err(LemmaError::ZeroClaim);
    }
    if claimed.is_negative() {
        return Ok(CertificateVerdict::Reject(RejectReason::NotPositive));
    }
    let n = pp.exponents.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    let n_rat = Rat::from_int(n.clone());
    for (p, alpha) in pp.primes.iter().zip(&pp.exponents) {
        let found = &n * BigInt::from(valuation_unchecked(p, claimed));
        let expected = &n_rat * alpha;
        if Rat::from_int(found.clone()) != expected {
            return Ok(CertificateVerdict::Reject(RejectReason::ValuationMismatch {
                prime: p.clone(),
                expected,
                found,
            }));
        }
    }
    for part in [claimed.numer().abs(), claimed.denom().clone()] {
        let mut rest = part;
        for p in &pp.primes {
            while (&rest % p).is_zero() {
                rest /= p;
            }
        }
        if !rest.is_one() {
            return Ok(CertificateVerdict::Reject(RejectReason::ForeignFactor(rest)));
        }
    }
    Ok(CertificateVerdict::Accept)
}

// ------------------------------------------------------------- Pell witness

/// `(4m+2)·x_bar² + 1 = square_root²` with `x_bar ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellWitness {
    pub m: BigInt,
    pub x_bar: BigInt,
    pub square_root: BigInt,
}

impl PellWitness {
    pub fn holds(&self) -> bool {
        let d = &self.m * 4 + 2;
        !self.x_bar.is_zero() && &d * &self.x_bar * &self.x_bar + 1 == &self.square_root * &self.square_root
    }
}

/// For `m < 0`: `(4m+2)x² + 1 ≤ 1 − 2x² < 0` for every nonzero integer `x`,
/// so the value is never a square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeRefutation {
    pub m: BigInt,
}

impl NegativeRefutation {
    pub fn coefficient(&self) -> BigInt {
        &self.m * 4 + 2
    }

    /// Upper bound `1 − 2x²` on `(4m+2)x² + 1`.
    pub fn bound_at(&self, x: &BigInt) -> BigInt {
        BigInt::one() - BigInt::from(2) * x * x
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PellOutcome {
    Witness(PellWitness),
    Negative(NegativeRefutation),
}

/// Decides `m ≥ 0` by exhibiting the fundamental solution of `u² − (4m+2)x² = 1`.
pub fn nonneg_witness_pell(m: &BigInt) -> PellOutcome {
    if m.is_negative() {
        return PellOutcome::Negative(NegativeRefutation { m: m.clone() });
    }
    // 4m + 2 ≡ 2 (mod 4) is never a square.
    let d = (m * 4u32 + 2u32).to_biguint().expect("positive");
    let sol = pell_fundamental(&d).expect("4m+2 is a nonsquare");
    let w = PellWitness {
        m: m.clone(),
        x_bar: BigInt::from_biguint(Sign::Plus, sol.x),
        square_root: BigInt::from_biguint(Sign::Plus, sol.u),
    };
    debug_assert!(w.holds());
    PellOutcome::Witness(w)
}

// ------------------------------------------------- relation-combining decision

/// `W = (k + ∑ A_s²)(1 + ∑ A_s⁻²)`; every `A_s` must be nonzero.
pub fn w_value(a: &[Rat]) -> Rat {
    let k = Rat::from(a.len() as i64);
    let sum_sq = a.iter().fold(Rat::zero(), |acc, v| acc + v.square());
    let sum_inv = a.iter().fold(Rat::zero(), |acc, v| acc + v.square().recip());
    (k + sum_sq) * (Rat::one() + sum_inv)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JkDecision {
    /// Every argument is a square; `x` is a root of `J_k(A, ·)`.
    AllSquares { roots: Vec<Rat>, w: Rat, x: Rat },
    /// The argument at `index` is not a rational square.
    NotAllSquares { index: usize },
}

pub fn jk_point(a: &[Rat], x: &Rat) -> BTreeMap<String, Rat> {
    let mut point: BTreeMap<String, Rat> =
        a.iter().enumerate().map(|(s, v)| (format!("A{}", s + 1), v.clone())).collect();
    point.insert("x".into(), x.clone());
    point
}

/// Decides whether all `A_s` are rational squares, with a root of `J_k` as
/// witness `x = −∑ √A_s · W^{s−1}`.
pub fn jk_decision(a: &[Rat]) -> Result<JkDecision, LemmaError> {
    let k = a.len();
    let jk = jk_cached(k)?;
    if let Some(i) = a.iter().position(Rat::is_zero) {
        return Err(LemmaError::ZeroArgument(i));
    }
    let mut roots = Vec::with_capacity(k);
    for (i, v) in a.iter().enumerate() {
        match is_square(v) {
            Some(r) => roots.push(r),
            None => return Ok(JkDecision::NotAllSquares { index: i }),
        }
    }
    let w = w_value(a);
    let mut x = Rat::zero();
    let mut w_pow = Rat::one();
    for r in &roots {
        x = x - r * &w_pow;
        w_pow = w_pow * &w;
    }
    let value = jk.eval(&jk_point(a, &x))?;
    if !value.is_zero() {
        return Err(LemmaError::Internal(format!("J_{k} does not vanish at its witness")));
    }
    Ok(JkDecision::AllSquares { roots, w, x })
}

// ---------------------------------------------------- rational ternary forms

/// `alpha = x1² + x2² + δ·x3²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalTernary {
    pub alpha: Rat,
    pub delta: Delta,
    pub x1: Rat,
    pub x2: Rat,
    pub x3: Rat,
}

impl RationalTernary {
    pub fn holds(&self) -> bool {
        let d = Rat::from(self.delta.value() as i64);
        self.x1.square() + self.x2.square() + d * self.x3.square() == self.alpha
    }
}

/// Writes `alpha = a/b ≥ 0` through an integer representation of `ab` scaled
/// by `1/b`, preferring `δ = 1`.
pub fn three_squares_rational(alpha: &Rat) -> Result<RationalTernary, LemmaError> {
    if alpha.is_negative() {
        return Err(LemmaError::NegativeInput(alpha.clone()));
    }
    let ab: BigUint = (alpha.numer() * alpha.denom()).to_biguint().expect("nonnegative");
    let ab = ab.to_u64().ok_or(LemmaError::TooLarge)?;
    let rep = Delta::ALL
        .into_iter()
        .find_map(|d| three_squares_int(ab, d))
        .ok_or_else(|| LemmaError::Internal(format!("{ab} lies in both exceptional sets")))?;
    let b = alpha.denom();
    let scale = |v: u64| Rat::new(BigInt::from(v), b.clone());
    let out = RationalTernary {
        alpha: alpha.clone(),
        delta: rep.delta,
        x1: scale(rep.x),
        x2: scale(rep.y),
        x3: scale(rep.z),
    };
    debug_assert!(out.holds());
    Ok(out)
}
