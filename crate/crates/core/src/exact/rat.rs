//! Arbitrary-precision rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored reduced with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Formats as `a` or `a/b`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a`, `-a`, or `a/b`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg}: `{s}`") };
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("bad rational numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("bad rational denominator"))?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rat::new(num, den))
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
