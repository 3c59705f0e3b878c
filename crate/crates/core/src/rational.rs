//! Exact rational helpers.
//!
//! Every degree, bound and coefficient in the reasoner is a [`Rat`]. Decimal
//! input such as `0.72` is converted exactly (`18/25`), never through `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(pub String);

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `p/q`, an integer, or a terminating decimal (`-12.375`).
pub fn parse_rat(text: &str) -> Result<Rat, ParseRatError> {
    let s = text.trim();
    let err = || ParseRatError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    let digits_ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(whole) || !digits_ok(frac) {
        return Err(err());
    }
    let mut numer: BigInt = if whole.is_empty() {
        BigInt::zero()
    } else {
        whole.parse().map_err(|_| err())?
    };
    let mut denom = BigInt::one();
    for ch in frac.chars() {
        numer = numer * 10 + BigInt::from(ch.to_digit(10).unwrap_or(0));
        denom *= 10;
    }
    let value = Rat::new(numer, denom);
    Ok(if neg { -value } else { value })
}

/// Canonical `p/q` rendering; integers render as `p/1`.
pub fn fmt_ratio(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Short rendering: integers without a denominator.
pub fn fmt_short(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        fmt_ratio(r)
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Distance of `r` from 1/2, used to pick the most fractional binary.
pub fn dist_from_half(r: &Rat) -> Rat {
    (r - rat(1, 2)).abs()
}

pub fn min_rat(a: &Rat, b: &Rat) -> Rat {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max_rat(a: &Rat, b: &Rat) -> Rat {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}
