//! Independent oracles used by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use dioforge::arith::Rat;
use dioforge::expr::Expr;
use dioforge::poly::MPoly;

pub fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

pub fn rats(v: &[&str]) -> Vec<Rat> {
    v.iter().map(|s| r(s)).collect()
}

pub fn rand_rat(rng: &mut impl Rng, num: i64, den: i64, nonzero: bool) -> Rat {
    loop {
        let n = rng.gen_range(-num..=num);
        if nonzero && n == 0 {
            continue;
        }
        return Rat::new(n, rng.gen_range(1..=den));
    }
}

// ------------------------------------------------ conjugate-pairing oracle

/// Element of Q[r_1..r_k]/(r_s^2 - A_s) keyed by radical bitmask.
#[derive(Clone, Debug)]
struct Radical(HashMap<u32, Rat>);

fn radical_mul(a: &Radical, b: &Radical, squares: &[Rat]) -> Radical {
    let mut out: HashMap<u32, Rat> = HashMap::new();
    for (ma, ca) in &a.0 {
        for (mb, cb) in &b.0 {
            let mut c = ca * cb;
            for (s, sq) in squares.iter().enumerate() {
                if ma & mb & (1 << s) != 0 {
                    c = c * sq;
                }
            }
            let e = out.entry(ma ^ mb).or_insert_with(Rat::zero);
            *e = &*e + &c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    Radical(out)
}

/// `∏A_s^{(k-1)2^{k+1}} · ∏_ε (x + ∑ ε_s √A_s W^{s-1})` evaluated exactly
/// in the radical extension. Returns None if a radical survives.
pub fn jk_factored(a: &[Rat], x: &Rat) -> Option<Rat> {
    let k = a.len();
    let n = Rat::from(k as i64);
    let s2: Rat = a.iter().fold(Rat::zero(), |acc, v| acc + v * v);
    let si: Rat = a.iter().fold(Rat::zero(), |acc, v| acc + (v * v).recip());
    let w = (n + s2) * (Rat::one() + si);

    let mut prod = Radical(HashMap::from([(0, Rat::one())]));
    for signs in 0u32..(1 << k) {
        let mut f = HashMap::from([(0u32, x.clone())]);
        let mut wp = Rat::one();
        for s in 0..k {
            let c = if signs & (1 << s) != 0 { -wp.clone() } else { wp.clone() };
            f.insert(1 << s, c);
            wp = wp * &w;
        }
        prod = radical_mul(&prod, &Radical(f), a);
    }
    if prod.0.keys().any(|&m| m != 0) {
        return None;
    }
    let core = prod.0.get(&0).cloned().unwrap_or_else(Rat::zero);
    let e = ((k as i64) - 1) << (k + 1);
    let pre = a.iter().fold(Rat::one(), |acc, v| acc * v.powi(e));
    Some(core * pre)
}

// ---------------------------------------------------- rational root oracle

#[derive(Clone, Copy, Debug)]
struct C(f64, f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C) -> C {
        let d = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
}

/// Approximate complex roots of a monic polynomial (low degree first).
fn durand_kerner(monic: &[f64]) -> Vec<C> {
    let n = monic.len() - 1;
    let bound = 1.0 + monic[..n].iter().fold(0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<C> = (0..n)
        .map(|i| {
            let t = 0.4 + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            C(bound * t.cos(), bound * t.sin())
        })
        .collect();
    let eval = |x: C| monic.iter().rev().fold(C(0.0, 0.0), |acc, &c| acc.mul(x).add(C(c, 0.0)));
    for _ in 0..2000 {
        let prev = z.clone();
        for i in 0..n {
            let mut den = C(1.0, 0.0);
            for (j, zj) in prev.iter().enumerate() {
                if i != j {
                    den = den.mul(z[i].sub(*zj));
                }
            }
            z[i] = z[i].sub(eval(z[i]).div(den));
        }
    }
    z
}

fn eval_rat_poly(coeffs: &[Rat], x: &Rat) -> Rat {
    coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

fn floor(x: &Rat) -> BigInt {
    x.as_big_rational().floor().to_integer()
}

/// The rational of least denominator in `[lo, hi]`.
fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    if *lo <= 0 && !hi.is_negative() {
        return Rat::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let n = Rat::from_int(-floor(&-lo.clone()));
    if n <= *hi {
        return n;
    }
    let fl = Rat::from_int(floor(lo));
    fl.clone() + simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip()).recip()
}

/// All rational roots of a polynomial with rational coefficients (low degree
/// first). A rational root has denominator dividing the leading coefficient
/// `L` of the primitive integer multiple, so once a real root is isolated in
/// an interval narrower than `1/(2L^2)` the simplest rational there is the
/// only candidate.
pub fn rational_roots(coeffs: &[Rat]) -> Vec<Rat> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.last().is_some_and(Rat::is_zero) {
        coeffs.pop();
    }
    let mut roots = Vec::new();
    while coeffs.len() > 1 && coeffs[0].is_zero() {
        coeffs.remove(0);
        if !roots.contains(&Rat::zero()) {
            roots.push(Rat::zero());
        }
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return roots;
    }
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &Rat::from_int(den.clone())).to_integer().unwrap()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let lead = (&ints[n] / &g).abs();
    let target = Rat::new(BigInt::one(), &lead * &lead * 2);

    let lead_c = coeffs[n].clone();
    let monic: Vec<f64> = coeffs
        .iter()
        .map(|c| {
            let v = c / &lead_c;
            v.numer().to_f64().unwrap() / v.denom().to_f64().unwrap()
        })
        .collect();
    for z in durand_kerner(&monic) {
        if z.1.abs() > 1e-6 * (1.0 + z.0.abs()) {
            continue;
        }
        let mut eps = 1e-9 * (1.0 + z.0.abs());
        let bracket = loop {
            let lo = Rat::from(BigRational::from_float(z.0 - eps).unwrap());
            let hi = Rat::from(BigRational::from_float(z.0 + eps).unwrap());
            let (flo, fhi) = (eval_rat_poly(&coeffs, &lo), eval_rat_poly(&coeffs, &hi));
            for (v, end) in [(&flo, &lo), (&fhi, &hi)] {
                if v.is_zero() && !roots.contains(end) {
                    roots.push(end.clone());
                }
            }
            if !flo.is_zero() && !fhi.is_zero() && flo.is_negative() != fhi.is_negative() {
                break Some((lo, hi));
            }
            eps *= 10.0;
            if eps > 1e-3 * (1.0 + z.0.abs()) {
                break None;
            }
        };
        let Some((mut lo, mut hi)) = bracket else { continue };
        let lo_neg = eval_rat_poly(&coeffs, &lo).is_negative();
        while &hi - &lo >= target {
            let mid = (&lo + &hi) / Rat::from(2);
            let fm = eval_rat_poly(&coeffs, &mid);
            if fm.is_zero() {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if fm.is_negative() == lo_neg {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let cand = simplest_between(&lo, &hi);
        if eval_rat_poly(&coeffs, &cand).is_zero() && !roots.contains(&cand) {
            roots.push(cand);
        }
    }
    roots
}

/// Coefficients in `x` of `p` with every other indeterminate bound.
pub fn coefficients_in(p: &MPoly, x: &str, point: &BTreeMap<String, Rat>) -> Vec<Rat> {
    (0..=p.degree_in(x)).map(|e| p.coefficient_of(x, e).eval(point).unwrap()).collect()
}

// ------------------------------------------------------- misc brute force

pub fn is_square_i128(v: i128) -> bool {
    v >= 0 && {
        let s = (v as u128).sqrt();
        s * s == v as u128
    }
}

/// Smallest `(u, x)` with `u^2 - d x^2 = 1`, `x ≥ 1`, by search.
pub fn pell_brute(d: u64, limit: u64) -> Option<(u64, u64)> {
    (1..=limit).find_map(|x| {
        let v = (d as u128) * (x as u128) * (x as u128) + 1;
        let u = v.sqrt();
        (u * u == v).then_some((u as u64, x))
    })
}

/// `representable[n]` for `n ≤ limit` as `x^2 + y^2 + δ z^2`.
pub fn ternary_sieve(limit: usize, delta: usize) -> Vec<bool> {
    let mut rep = vec![false; limit + 1];
    let mut x = 0;
    while x * x <= limit {
        let mut y = x;
        while x * x + y * y <= limit {
            let mut z = 0;
            while x * x + y * y + delta * z * z <= limit {
                rep[x * x + y * y + delta * z * z] = true;
                z += 1;
            }
            y += 1;
        }
        x += 1;
    }
    rep
}

// --------------------------------------------------- random expressions

pub fn rand_expr(rng: &mut impl Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.5) {
            Expr::nat(rng.gen_range(0u32..1000))
        } else {
            const NAMES: [&str; 6] = ["x", "y", "z", "xb", "u1", "w_2"];
            Expr::var(NAMES[rng.gen_range(0..NAMES.len())])
        };
    }
    let a = rand_expr(rng, depth - 1);
    let b = rand_expr(rng, depth - 1);
    match rng.gen_range(0..4) {
        0 => Expr::add(a, b),
        1 => Expr::sub(a, b),
        2 => Expr::mul(a, b),
        _ => Expr::pow(a, b),
    }
}
