//! Exact rational scalars and the helpers the rest of the crate leans on.
//!
//! `Rational` is `num_rational::BigRational`, which already keeps values in
//! lowest terms with a positive denominator.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_int(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// Fractional part `x - floor(x)`, always in `[0, 1)`.
pub fn fract(x: &Rational) -> Rational {
    x - from_int(&floor(x))
}

pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

fn bit_len_plus_one(v: &BigInt) -> u64 {
    // ceil(log2(v + 1)) for v >= 0
    let w = v + BigInt::one();
    let bits = w.bits();
    if w == BigInt::one() << (bits - 1) {
        bits - 1
    } else {
        bits
    }
}

/// Encoding size `1 + ceil(log(|p|+1)) + ceil(log(q+1))` of a rational `p/q`.
pub fn size(x: &Rational) -> u64 {
    1 + bit_len_plus_one(&x.numer().abs()) + bit_len_plus_one(x.denom())
}

pub fn vector_size(v: &[Rational]) -> u64 {
    v.len() as u64 + v.iter().map(size).sum::<u64>()
}

/// Parses `"p/q"` or `"p"`; rejects anything that is not an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(p, q))
    } else {
        Ok(Rational::from_integer(BigInt::from_str(t).map_err(|_| bad())?))
    }
}

pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Extended Euclid: `(g, u, v)` with `g = gcd(a, b) >= 0` and `u*a + v*b = g`.
pub fn gcd_ext(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else if old_r.is_zero() {
        (BigInt::zero(), BigInt::zero(), BigInt::zero())
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn gcd_all<'a>(vals: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    vals.into_iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

/// Closest rational with denominator at most `max_denom`; ties go to the
/// smaller denominator.
pub fn rational_reconstruct(x: &Rational, max_denom: &BigInt) -> Rational {
    assert!(max_denom >= &BigInt::one(), "denominator bound must be >= 1");
    if x.denom() <= max_denom {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_denom {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    let k = (max_denom - &q0).div_floor(&q1);
    let semi = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = Rational::new(p1, q1);
    let ds = (&semi - x).abs();
    let dc = (&conv - x).abs();
    if dc < ds || (dc == ds && conv.denom() <= semi.denom()) {
        conv
    } else {
        semi
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Least common multiple of the denominators of `v`.
pub fn denom_lcm(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Scales `v` by a positive factor to a primitive integral vector. Returns the
/// integral entries and the (positive) factor used. Zero vectors are returned
/// unchanged with factor 1.
pub fn primitive_integral(v: &[Rational]) -> (Vec<BigInt>, Rational) {
    let l = denom_lcm(v);
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = gcd_all(ints.iter());
    if g.is_zero() {
        return (ints, Rational::one());
    }
    let out = ints.iter().map(|x| x / &g).collect();
    (out, Rational::new(l, g))
}
