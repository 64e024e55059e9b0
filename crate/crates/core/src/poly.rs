//! Sparse multivariate polynomials with integer coefficients, and the
//! square-root-adjoined ring used to expand the relation-combining
//! polynomial `J_k`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("no value for indeterminate {0}")]
    UnboundIndeterminate(String),
    #[error("radical term survived expansion")]
    RadicalResidue,
    #[error("denominator did not clear")]
    DenominatorResidue,
    #[error("k = {0} is outside the supported range")]
    UnsupportedK(usize),
    #[error("polynomial parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// Exponent vector, indexed like `MPoly::vars`.
pub type Monomial = Vec<u32>;

/// A polynomial over named indeterminates. The indeterminate order fixes the
/// lexicographic monomial order used for storage and printing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl MPoly {
    pub fn zero(vars: &[&str]) -> MPoly {
        MPoly { vars: vars.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], c: impl Into<BigInt>) -> MPoly {
        let mut p = MPoly::zero(vars);
        p.add_term(vec![0; vars.len()], c.into());
        p
    }

    pub fn var(vars: &[&str], name: &str) -> MPoly {
        let mut p = MPoly::zero(vars);
        let idx = p.index_of(name).unwrap_or_else(|| panic!("{name} not among {vars:?}"));
        let mut mono = vec![0; vars.len()];
        mono[idx] = 1;
        p.add_term(mono, BigInt::one());
        p
    }

    pub fn from_terms(vars: &[&str], terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> MPoly {
        let mut p = MPoly::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len());
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, mono: &[u32]) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, mono: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-indexes onto `vars`, which must contain every indeterminate of `self`
    /// that occurs with a nonzero exponent.
    pub fn with_vars(&self, vars: &[&str]) -> MPoly {
        let map: Vec<Option<usize>> =
            self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut out = MPoly::zero(vars);
        for (m, c) in &self.terms {
            let mut nm = vec![0; vars.len()];
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].unwrap_or_else(|| panic!("{} missing from target vars", self.vars[i]));
                nm[j] = e;
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    fn aligned(&self, other: &MPoly) -> (MPoly, MPoly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let mut vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        for v in &other.vars {
            if !vars.contains(&v.as_str()) {
                vars.push(v);
            }
        }
        (self.with_vars(&vars), other.with_vars(&vars))
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let (mut a, b) = self.aligned(other);
        for (m, c) in b.terms {
            a.add_term(m, c);
        }
        a
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let (a, b) = self.aligned(other);
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                *acc.entry(m).or_default() += ca * cb;
            }
        }
        let mut out = MPoly { vars: a.vars, terms: BTreeMap::new() };
        for (m, c) in acc {
            out.add_term(m, c);
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> MPoly {
        let mut out = MPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Multiplies by the monomial with exponent vector `shift`.
    pub fn shift(&self, shift: &[u32]) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = MPoly::constant(&self.var_refs(), 1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    /// Highest exponent of `name` (0 when absent).
    pub fn degree_in(&self, name: &str) -> u32 {
        match self.index_of(name) {
            Some(i) => self.terms.keys().map(|m| m[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Coefficient polynomial of `name^e`, over the same indeterminates.
    pub fn coefficient_of(&self, name: &str, e: u32) -> MPoly {
        let i = self.index_of(name).expect("indeterminate present");
        let mut out = MPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            if m[i] == e {
                let mut nm = m.clone();
                nm[i] = 0;
                out.add_term(nm, c.clone());
            }
        }
        out
    }

    /// Replaces an indeterminate by a polynomial; the indeterminate is kept
    /// in the variable list with exponent zero everywhere.
    pub fn substitute(&self, name: &str, value: &MPoly) -> MPoly {
        let Some(i) = self.index_of(name) else { return self.clone() };
        let value = value.with_vars(&self.var_refs());
        let mut powers: Vec<MPoly> = vec![MPoly::constant(&self.var_refs(), 1)];
        let mut out = MPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            let e = m[i] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(&value);
                powers.push(next);
            }
            let mut rest = m.clone();
            rest[i] = 0;
            for (pm, pc) in &powers[e].terms {
                let nm: Monomial = rest.iter().zip(pm).map(|(a, b)| a + b).collect();
                out.add_term(nm, c * pc);
            }
        }
        out
    }

    /// Exact evaluation at a rational point.
    ///
    /// All terms are brought over the common denominator `∏ d_v^{deg_v}` so
    /// the inner loop is integer-only.
    pub fn eval(&self, point: &BTreeMap<String, Rat>) -> Result<Rat, PolyError> {
        let n = self.vars.len();
        let mut values = Vec::with_capacity(n);
        for (i, v) in self.vars.iter().enumerate() {
            let used = self.terms.keys().any(|m| m[i] > 0);
            match point.get(v) {
                Some(val) => values.push(val.clone()),
                None if !used => values.push(Rat::zero()),
                None => return Err(PolyError::UnboundIndeterminate(v.clone())),
            }
        }
        let degrees: Vec<u32> =
            (0..n).map(|i| self.terms.keys().map(|m| m[i]).max().unwrap_or(0)).collect();
        // table[i][e] = numer_i^e · denom_i^(deg_i − e)
        let tables: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let (num, den) = (values[i].numer(), values[i].denom());
                let deg = degrees[i] as usize;
                let mut num_pows = vec![BigInt::one()];
                let mut den_pows = vec![BigInt::one()];
                for _ in 0..deg {
                    num_pows.push(num_pows.last().unwrap() * num);
                    den_pows.push(den_pows.last().unwrap() * den);
                }
                (0..=deg).map(|e| &num_pows[e] * &den_pows[deg - e]).collect()
            })
            .collect();
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if degrees[i] > 0 {
                    t *= &tables[i][e as usize];
                }
            }
            total += t;
        }
        let mut denom = BigInt::one();
        for i in 0..n {
            if degrees[i] > 0 {
                denom *= values[i].denom().pow(degrees[i]);
            }
        }
        Ok(Rat::new(total, denom))
    }

    /// Univariate coefficient list (ascending) in `name`, for a polynomial
    /// whose other indeterminates all have exponent zero.
    pub fn univariate_coefficients(&self, name: &str) -> Option<Vec<BigInt>> {
        let i = self.index_of(name);
        let deg = self.degree_in(name) as usize;
        let mut out = vec![BigInt::zero(); deg + 1];
        for (m, c) in &self.terms {
            for (j, &e) in m.iter().enumerate() {
                if Some(j) != i && e > 0 {
                    return None;
                }
            }
            let e = i.map(|i| m[i]).unwrap_or(0) as usize;
            out[e] += c;
        }
        Some(out)
    }

    /// Parses the textual form, ordering indeterminates by first appearance.
    pub fn parse(text: &str) -> Result<MPoly, PolyError> {
        parse_terms(text).map(|(vars, terms)| {
            let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
            MPoly::from_terms(&refs, terms)
        })
    }

    /// Parses the textual form onto a fixed indeterminate list.
    pub fn parse_with_vars(text: &str, vars: &[&str]) -> Result<MPoly, PolyError> {
        let p = MPoly::parse(text)?;
        if let Some(stray) = p.vars.iter().find(|v| !vars.contains(&v.as_str())) {
            return Err(PolyError::Parse {
                offset: 0,
                message: format!("unexpected indeterminate {stray}"),
            });
        }
        Ok(p.with_vars(vars))
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], m: &[u32], mut first: bool) -> fmt::Result {
    for (v, &e) in vars.iter().zip(m) {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(v)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for MPoly {
    /// `c*x^e0*A1^e1*…` terms in descending lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let constant = m.iter().all(|&e| e == 0);
            if constant {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write_monomial(f, &self.vars, m, true)?;
            } else {
                write!(f, "{mag}")?;
                write_monomial(f, &self.vars, m, false)?;
            }
        }
        Ok(())
    }
}

impl FromStr for MPoly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<MPoly, PolyError> {
        MPoly::parse(s)
    }
}

type ParsedTerms = (Vec<String>, Vec<(Monomial, BigInt)>);

fn parse_terms(text: &str) -> Result<ParsedTerms, PolyError> {
    let src = text.as_bytes();
    let mut pos = 0usize;
    let err = |offset: usize, message: &str| PolyError::Parse { offset, message: message.into() };
    let skip = |pos: &mut usize| {
        while *pos < src.len() && src[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let number = |pos: &mut usize| -> Option<BigInt> {
        let start = *pos;
        while *pos < src.len() && src[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos).then(|| text[start..*pos].parse().unwrap())
    };
    let mut vars: Vec<String> = Vec::new();
    let mut raw: Vec<(Vec<(usize, u32)>, BigInt)> = Vec::new();
    let mut first = true;
    loop {
        skip(&mut pos);
        let mut sign = BigInt::one();
        if pos < src.len() && (src[pos] == b'+' || src[pos] == b'-') {
            if src[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
            skip(&mut pos);
        } else if !first {
            if pos >= src.len() {
                break;
            }
            return Err(err(pos, "expected \"+\" or \"-\""));
        }
        first = false;
        let mut coeff = sign;
        let mut factors: Vec<(usize, u32)> = Vec::new();
        loop {
            skip(&mut pos);
            if let Some(n) = number(&mut pos) {
                coeff *= n;
            } else if pos < src.len() && (src[pos].is_ascii_alphabetic() || src[pos] == b'_') {
                let start = pos;
                while pos < src.len() && (src[pos].is_ascii_alphanumeric() || src[pos] == b'_') {
                    pos += 1;
                }
                let name = &text[start..pos];
                let idx = match vars.iter().position(|v| v == name) {
                    Some(i) => i,
                    None => {
                        vars.push(name.to_string());
                        vars.len() - 1
                    }
                };
                skip(&mut pos);
                let mut e = 1u32;
                if pos < src.len() && src[pos] == b'^' {
                    pos += 1;
                    skip(&mut pos);
                    let at = pos;
                    e = number(&mut pos)
                        .and_then(|n| n.to_u32())
                        .ok_or_else(|| err(at, "expected exponent"))?;
                }
                factors.push((idx, e));
            } else {
                return Err(err(pos, "expected coefficient or indeterminate"));
            }
            skip(&mut pos);
            if pos < src.len() && src[pos] == b'*' {
                pos += 1;
            } else {
                break;
            }
        }
        raw.push((factors, coeff));
    }
    let n = vars.len();
    let terms = raw
        .into_iter()
        .map(|(factors, c)| {
            let mut m = vec![0u32; n];
            for (i, e) in factors {
                m[i] += e;
            }
            (m, c)
        })
        .collect();
    Ok((vars, terms))
}

// ------------------------------------------------------- radical products

/// Names of the indeterminates `x, A1, …, Ak` (plus `W` when requested).
pub fn jk_vars(k: usize, with_w: bool) -> Vec<String> {
    let mut v = vec!["x".to_string()];
    v.extend((1..=k).map(|s| format!("A{s}")));
    if with_w {
        v.push("W".to_string());
    }
    v
}

/// Element of `Z[x, A, W][r_1, …, r_k] / (r_s² − A_s)`: every monomial
/// carries a bitmask of the radicals present to degree one.
#[derive(Debug, Clone, Default)]
struct RadicalPoly {
    terms: HashMap<(u32, Monomial), BigInt>,
}

impl RadicalPoly {
    fn mul(&self, other: &RadicalPoly) -> RadicalPoly {
        let mut acc: HashMap<(u32, Monomial), BigInt> = HashMap::new();
        for ((ra, ma), ca) in &self.terms {
            for ((rb, mb), cb) in &other.terms {
                let mut m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                // r_s · r_s = A_s; A_s sits at index s (x is index 0).
                let both = ra & rb;
                for s in 0..32 {
                    if both & (1 << s) != 0 {
                        m[s + 1] += 1;
                    }
                }
                *acc.entry((ra ^ rb, m)).or_default() += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        RadicalPoly { terms: acc }
    }
}

fn check_k(k: usize, max: usize) -> Result<(), PolyError> {
    if (1..=max).contains(&k) {
        Ok(())
    } else {
        Err(PolyError::UnsupportedK(k))
    }
}

/// `∏_{ε ∈ {±1}^k} (x + ∑_s ε_s √A_s W^{s−1})` over `x, A1…Ak, W`.
pub fn signed_radical_product(k: usize) -> Result<MPoly, PolyError> {
    check_k(k, 4)?;
    let nvars = k + 2;
    let w_idx = k + 1;
    let mut product = RadicalPoly::default();
    product.terms.insert((0, vec![0; nvars]), BigInt::one());
    for signs in 0u32..(1 << k) {
        let mut factor = RadicalPoly::default();
        let mut xm = vec![0; nvars];
        xm[0] = 1;
        factor.terms.insert((0, xm), BigInt::one());
        for s in 0..k {
            let mut m = vec![0; nvars];
            m[w_idx] = s as u32;
            let c = if signs & (1 << s) != 0 { -BigInt::one() } else { BigInt::one() };
            factor.terms.insert((1 << s, m), c);
        }
        product = product.mul(&factor);
    }
    let vars = jk_vars(k, true);
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let mut out = MPoly::zero(&refs);
    for ((radicals, m), c) in product.terms {
        if radicals != 0 {
            return Err(PolyError::RadicalResidue);
        }
        out.add_term(m, c);
    }
    Ok(out)
}

/// `W = (k + ∑A_s²)(1 + ∑A_s⁻²)` as `numerator / ∏ A_s^denominator_exponents[s]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WPoly {
    pub numerator: MPoly,
    pub denominator_exponents: Vec<u32>,
}

impl WPoly {
    pub fn eval(&self, a: &[Rat]) -> Result<Rat, PolyError> {
        let point: BTreeMap<String, Rat> =
            a.iter().enumerate().map(|(s, v)| (format!("A{}", s + 1), v.clone())).collect();
        let num = self.numerator.eval(&point)?;
        let den = a
            .iter()
            .zip(&self.denominator_exponents)
            .fold(Rat::one(), |acc, (v, &e)| acc * v.powi(e.into()));
        if den.is_zero() {
            return Err(PolyError::DenominatorResidue);
        }
        Ok(num / den)
    }
}

pub fn w_polynomial(k: usize) -> Result<WPoly, PolyError> {
    if k == 0 {
        return Err(PolyError::UnsupportedK(0));
    }
    let names: Vec<String> = (1..=k).map(|s| format!("A{s}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let sq = |s: usize| MPoly::var(&refs, refs[s]).pow(2);
    let mut first = MPoly::constant(&refs, k as i64);
    for s in 0..k {
        first = first.add(&sq(s));
    }
    // (1 + ∑ A_s⁻²) · ∏ A_s² = ∏ A_s² + ∑_t ∏_{s≠t} A_s²
    let all: MPoly = (0..k).fold(MPoly::constant(&refs, 1), |acc, s| acc.mul(&sq(s)));
    let mut second = all;
    for t in 0..k {
        let omit = (0..k).filter(|&s| s != t).fold(MPoly::constant(&refs, 1), |acc, s| acc.mul(&sq(s)));
        second = second.add(&omit);
    }
    Ok(WPoly { numerator: first.mul(&second), denominator_exponents: vec![2; k] })
}

/// Exponent `(k−1)·2^{k+1}` of the `∏ A_s` prefactor.
pub fn jk_prefactor_exponent(k: usize) -> u32 {
    ((k as u32) - 1) << (k + 1)
}

/// The integer polynomial `J_k(A_1, …, A_k, x)` over `x, A1…Ak`, for k ≤ 3.
///
/// `k = 4` is refused: its prefactor exponent is 96 and the expansion of
/// `N^48` does not fit in desk-scale memory.
pub fn jk_expand(k: usize) -> Result<MPoly, PolyError> {
    check_k(k, 3)?;
    let product = signed_radical_product(k)?;
    let w = w_polynomial(k)?;
    let vars = jk_vars(k, false);
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let numerator = w.numerator.with_vars(&refs);
    let prefactor = jk_prefactor_exponent(k);
    let with_w: Vec<String> = jk_vars(k, true);
    let with_w: Vec<&str> = with_w.iter().map(String::as_str).collect();

    // P = ∑_j c_j W^j; the prefactor ∏A^E absorbs the (∏A²)^j of W^j.
    let mut out = MPoly::zero(&refs);
    let mut num_pow = MPoly::constant(&refs, 1);
    for j in 0..=product.degree_in("W") {
        if j > 0 {
            num_pow = num_pow.mul(&numerator);
        }
        let c_j = product.coefficient_of("W", j);
        if c_j.is_zero() {
            continue;
        }
        let c_j = MPoly::from_terms(
            &refs,
            c_j.terms.into_iter().map(|(m, c)| (m[..with_w.len() - 1].to_vec(), c)),
        );
        let mut shift = vec![0u32; k + 1];
        for (s, &d) in w.denominator_exponents.iter().enumerate() {
            let needed = d * j;
            if needed > prefactor {
                return Err(PolyError::DenominatorResidue);
            }
            shift[s + 1] = prefactor - needed;
        }
        out = out.add(&c_j.mul(&num_pow).shift(&shift));
    }
    Ok(out)
}

/// Shared expansions for k = 1, 2, 3.
pub fn jk_cached(k: usize) -> Result<&'static MPoly, PolyError> {
    static CACHE: [OnceLock<Result<MPoly, PolyError>>; 3] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    check_k(k, 3)?;
    CACHE[k - 1].get_or_init(|| jk_expand(k)).as_ref().map_err(Clone::clone)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(pairs: &[(&str, Rat)]) -> BTreeMap<String, Rat> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn ring_identities() {
        let vars = ["x", "A1"];
        let x = MPoly::var(&vars, "x");
        let a = MPoly::var(&vars, "A1");
        assert_eq!(x.add(&a).mul(&x.sub(&a)).to_string(), "x^2 - A1^2");
        let zero = MPoly::zero(&vars);
        assert_eq!(x.add(&zero), x);
        let one = MPoly::constant(&vars, 1);
        let cube = x.add(&one).pow(3);
        assert_eq!(cube.to_string(), "x^3 + 3*x^2 + 3*x + 1");
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn evaluation() {
        let p: MPoly = "x^2 - A".parse().unwrap();
        assert_eq!(p.eval(&point(&[("x", r("3")), ("A", r("9"))])), Ok(Rat::zero()));
        assert_eq!(p.eval(&point(&[("x", r("3")), ("A", r("2"))])), Ok(r("7")));
        assert_eq!(MPoly::zero(&["x"]).eval(&BTreeMap::new()), Ok(Rat::zero()));
        assert_eq!(
            p.eval(&point(&[("x", r("1"))])),
            Err(PolyError::UnboundIndeterminate("A".into()))
        );
        let q: MPoly = "3*x^2*y - 1".parse().unwrap();
        assert_eq!(q.eval(&point(&[("x", r("1/2")), ("y", r("-2/3"))])), Ok(r("-3/2")));
    }

    #[test]
    fn textual_form_roundtrip() {
        let text = "-4*x^3*A1 + x*A2^2 - 7*A1*A2 + 12";
        let p: MPoly = text.parse().unwrap();
        assert_eq!(p.to_string(), text);
        assert_eq!(p.to_string().parse::<MPoly>().unwrap(), p);
        assert!("x + + 1".parse::<MPoly>().is_err());
        assert!("x^".parse::<MPoly>().is_err());
        assert!("x y".parse::<MPoly>().is_err());
        let fixed = MPoly::parse_with_vars("A1 + x", &["x", "A1"]).unwrap();
        assert_eq!(fixed.to_string(), "x + A1");
    }

    #[test]
    fn substitution_matches_evaluation() {
        let p: MPoly = "x^3 + 2*x*y - y^2".parse().unwrap();
        let v: MPoly = "y + 1".parse().unwrap();
        let q = p.substitute("x", &v);
        for y in -3..=3i64 {
            let direct = p.eval(&point(&[("x", Rat::from(y + 1)), ("y", Rat::from(y))])).unwrap();
            assert_eq!(q.eval(&point(&[("y", Rat::from(y))])).unwrap(), direct);
        }
    }

    #[test]
    fn radical_product_k1() {
        let p = signed_radical_product(1).unwrap();
        assert_eq!(p.to_string(), "x^2 - A1");
        assert_eq!(p.degree_in("W"), 0);
    }

    #[test]
    fn radical_product_k2_roots() {
        let p = signed_radical_product(2).unwrap();
        // At A1 = A2 = 1 the factors are x ± 1 ± W.
        for w in [r("0"), r("3"), r("-5/7")] {
            for root in [
                Rat::one() + &w,
                -(Rat::one() + &w),
                Rat::one() - &w,
                -(Rat::one() - &w),
            ] {
                let pt = point(&[("x", root), ("A1", Rat::one()), ("A2", Rat::one()), ("W", w.clone())]);
                assert_eq!(p.eval(&pt), Ok(Rat::zero()));
            }
        }
    }

    #[test]
    fn radical_products_are_monic_of_degree_2_to_the_k() {
        for k in 1..=4 {
            let p = signed_radical_product(k).unwrap();
            let deg = 1u32 << k;
            assert_eq!(p.degree_in("x"), deg);
            let mut lead = vec![0; k + 2];
            lead[0] = deg;
            assert_eq!(p.coefficient(&lead), BigInt::one());
            assert_eq!(p.coefficient_of("x", deg).num_terms(), 1);
        }
        assert_eq!(signed_radical_product(5), Err(PolyError::UnsupportedK(5)));
    }

    #[test]
    fn w_values() {
        let w1 = w_polynomial(1).unwrap();
        let expect: MPoly = "A1^4 + 2*A1^2 + 1".parse().unwrap();
        assert_eq!(w1.numerator, expect);
        assert_eq!(w1.eval(&[Rat::one()]), Ok(r("4")));
        let w2 = w_polynomial(2).unwrap();
        assert_eq!(w2.eval(&[Rat::one(), Rat::one()]), Ok(r("12")));
        assert_eq!(w_polynomial(3).unwrap().eval(&[Rat::one(), Rat::one(), Rat::one()]), Ok(r("24")));
        // Direct formula at a non-unit point.
        let a = [r("2"), r("-1/3")];
        let direct = (r("2") + a[0].square() + a[1].square())
            * (Rat::one() + a[0].square().recip() + a[1].square().recip());
        assert_eq!(w2.eval(&a), Ok(direct));
    }

    #[test]
    fn jk_small_cases() {
        assert_eq!(jk_expand(1).unwrap().to_string(), "x^2 - A1");
        assert_eq!(jk_prefactor_exponent(1), 0);
        assert_eq!(jk_prefactor_exponent(2), 8);
        assert_eq!(jk_prefactor_exponent(3), 32);

        let j2 = jk_expand(2).unwrap();
        let pt = point(&[("x", Rat::zero()), ("A1", Rat::one()), ("A2", Rat::one())]);
        assert_eq!(j2.eval(&pt), Ok(r("20449")));
        assert_eq!(j2.degree_in("x"), 4);
        assert_eq!(jk_expand(4), Err(PolyError::UnsupportedK(4)));
    }

    #[test]
    fn jk3_vanishes_at_a_signed_root() {
        let j3 = jk_cached(3).unwrap();
        let w = r("24");
        let x = -(Rat::one() + &w + w.square());
        let pt = point(&[("x", x), ("A1", Rat::one()), ("A2", Rat::one()), ("A3", Rat::one())]);
        assert_eq!(j3.eval(&pt), Ok(Rat::zero()));
        assert_eq!(j3.degree_in("x"), 8);
    }
}
