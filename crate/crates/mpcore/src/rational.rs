//! Exact rationals and small vector helpers.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

/// Dense vector of exact rationals.
pub type RatVec = Vec<Rat>;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn ints(v: &[i64]) -> RatVec {
    v.iter().map(|&n| int(n)).collect()
}

/// Parses `7`, `-3` or `num/den`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::Parse(alloc::format!("not a rational literal: {t:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(alloc::format!("zero denominator in {t:?}")));
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

/// Parses a comma-separated vector of rational literals.
pub fn parse_vec(s: &str) -> Result<RatVec> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rat).collect()
}

/// `num/den` with integers printed without a denominator.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rat).collect();
    parts.join(",")
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Componentwise `a <= b`.
pub fn leq(a: &[Rat], b: &[Rat]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Componentwise `a < b`.
pub fn lt(a: &[Rat], b: &[Rat]) -> bool {
    a.iter().zip(b).all(|(x, y)| x < y)
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Least common multiple of all denominators.
pub fn common_denominator(v: &[Rat]) -> BigInt {
    v.iter()
        .fold(BigInt::one(), |acc, r| num_integer::Integer::lcm(&acc, r.denom()))
}

/// Scales `v` by a positive factor so that every entry is an integer and the
/// entries are jointly coprime. The zero vector is returned unchanged.
pub fn primitive(v: &[Rat]) -> RatVec {
    if is_zero_vec(v) {
        return v.to_vec();
    }
    let l = common_denominator(v);
    let nums: Vec<BigInt> = v.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    let g = nums
        .iter()
        .fold(BigInt::zero(), |acc, n| num_integer::Integer::gcd(&acc, n));
    nums.into_iter()
        .map(|n| Rat::from_integer(n / &g))
        .collect()
}

pub fn max_abs(v: &[Rat]) -> Rat {
    v.iter().map(|r| r.abs()).max().unwrap_or_else(Rat::zero)
}
