//! Exact rational scalars.
//!
//! The whole engine works over ℚ. `num::BigRational` keeps values in lowest
//! terms with a positive denominator, which is exactly the invariant the rest
//! of the code relies on; this module adds construction helpers and the
//! canonical "p/q" text form used by spec files and reports.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rational = BigRational;

/// Rational from a machine integer.
pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational p/q from machine integers. Panics on q == 0.
pub fn rat(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_zero() -> Rational {
    BigRational::zero()
}

pub fn rat_one() -> Rational {
    BigRational::one()
}

/// Canonical text form: "p/q" with q ≥ 1 and gcd(p, q) = 1, e.g. "-3/2", "5/1".
pub fn rat_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse "p/q" or a bare integer "p". Rejects zero denominators.
pub fn rat_parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let q: BigInt = q
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(p, q))
}

/// 1/n! as an exact rational.
pub fn inv_factorial(n: usize) -> Rational {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    BigRational::new(BigInt::one(), f)
}

/// Sign of a rational as -1, 0, +1.
pub fn rat_signum(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let r = rat(4, -6);
        assert_eq!(rat_to_string(&r), "-2/3");
        let r = rat(0, 5);
        assert_eq!(rat_to_string(&r), "0/1");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["3/4", "-7/2", "0/1", "12/1"] {
            let r = rat_parse(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        assert_eq!(rat_to_string(&rat_parse("5").unwrap()), "5/1");
        assert_eq!(rat_to_string(&rat_parse(" -8/12 ").unwrap()), "-2/3");
        assert!(rat_parse("1/0").is_err());
        assert!(rat_parse("x").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(inv_factorial(0), rat_one());
        assert_eq!(inv_factorial(3), rat(1, 6));
        assert_eq!(inv_factorial(5), rat(1, 120));
    }
}
