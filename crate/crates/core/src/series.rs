//! Truncated formal power series in the central parameter ℏ.
//!
//! Arithmetic happens in ℚ[ℏ]/(ℏ^N) for a fixed truncation order N chosen per
//! run. ℏ carries cohomological degree -2 and ℂ^×-weight -2; those constants
//! live here so every grading computation uses the same numbers.

use crate::error::{Error, Result};
use crate::scalar::{inv_factorial, rat_one, rat_to_string, Rational};
use num::Zero;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Cohomological degree of ℏ.
pub const HBAR_DEGREE: i64 = -2;
/// ℂ^×-weight of ℏ.
pub const HBAR_WEIGHT: i64 = -2;

/// Element of ℚ[ℏ]/(ℏ^N). `coeffs[k]` is the coefficient of ℏ^k; the vector
/// always has length exactly N.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        assert!(order > 0, "truncation order must be positive");
        Self {
            coeffs: vec![Rational::zero(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, rat_one())
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        Self::monomial(order, 0, c)
    }

    /// c·ℏ^k, or zero if k ≥ N.
    pub fn monomial(order: usize, k: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(order: usize, coeffs: &[Rational]) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in coeffs.iter().enumerate().take(order) {
            s.coeffs[k] = c.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Multiply by ℏ^k (shifting coefficients up, truncating the top).
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut s = Self::zero(n);
        for i in 0..n.saturating_sub(k) {
            s.coeffs[i + k] = self.coeffs[i].clone();
        }
        s
    }

    /// Divide by ℏ^k. Errors if any coefficient below order k is nonzero.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        let n = self.order();
        for i in 0..k.min(n) {
            if !self.coeffs[i].is_zero() {
                return Err(Error::DomainError(format!(
                    "series not divisible by h^{k}: {self}"
                )));
            }
        }
        let mut s = Self::zero(n);
        for i in k..n {
            s.coeffs[i - k] = self.coeffs[i].clone();
        }
        Ok(s)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(
            self.order(),
            other.order(),
            "mixed truncation orders in series arithmetic"
        );
    }

    /// exp(s) = Σ s^k/k! truncated. Requires zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::DomainError(
                "series_exp requires zero constant term".into(),
            ));
        }
        let n = self.order();
        let mut acc = Self::one(n);
        let mut power = Self::one(n);
        for k in 1..n {
            power = &power * self;
            acc = &acc + &power.scale(&inv_factorial(k));
        }
        Ok(acc)
    }

    /// Multiplicative inverse; requires invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::DomainError(
                "series has no inverse (zero constant term)".into(),
            ));
        }
        let n = self.order();
        let mut inv = Self::zero(n);
        inv.coeffs[0] = rat_one() / c0.clone();
        // Newton-free: solve coefficients order by order.
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 0..k {
                acc += &self.coeffs[k - j] * &inv.coeffs[j];
            }
            inv.coeffs[k] = -acc / c0.clone();
        }
        Ok(inv)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_order(rhs);
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_order(rhs);
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_order(rhs);
        let n = self.order();
        let mut out = TruncatedSeries::zero(n);
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] += &self.coeffs[i] * &rhs.coeffs[j];
            }
        }
        out
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", rat_to_string(c))?,
                1 => write!(f, "{}*h", rat_to_string(c))?,
                _ => write!(f, "{}*h^{}", rat_to_string(c), k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use proptest::prelude::*;

    fn h(order: usize) -> TruncatedSeries {
        TruncatedSeries::monomial(order, 1, rat_one())
    }

    #[test]
    fn exp_of_zero_is_one() {
        let z = TruncatedSeries::zero(4);
        assert_eq!(z.exp().unwrap(), TruncatedSeries::one(4));
    }

    #[test]
    fn exp_h_order_3() {
        // exp(h) at N=3 -> 1 + h + h^2/2
        let e = h(3).exp().unwrap();
        assert_eq!(e.coeff(0), rat_one());
        assert_eq!(e.coeff(1), rat_one());
        assert_eq!(e.coeff(2), rat(1, 2));
    }

    #[test]
    fn exp_h_plus_h2_order_3() {
        // Independent oracle: direct polynomial multiplication of
        // 1 + s + s^2/2 with s = h + h^2 gives 1 + h + (3/2) h^2.
        let s = &h(3) + &TruncatedSeries::monomial(3, 2, rat_one());
        let mut oracle = TruncatedSeries::one(3);
        oracle = &oracle + &s;
        oracle = &oracle + &(&s * &s).scale(&rat(1, 2));
        let e = s.exp().unwrap();
        assert_eq!(e, oracle);
        assert_eq!(e.coeff(2), rat(3, 2));
    }

    #[test]
    fn exp_rejects_constant_term() {
        assert!(TruncatedSeries::one(3).exp().is_err());
    }

    #[test]
    fn shift_down_errors_on_low_terms() {
        let s = TruncatedSeries::one(3);
        assert!(s.shift_down(1).is_err());
        let t = TruncatedSeries::monomial(3, 2, rat_int(5));
        assert_eq!(t.shift_down(2).unwrap().coeff(0), rat_int(5));
    }

    fn arb_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec((-20i64..20, 1i64..10), order).prop_map(move |v| {
            TruncatedSeries::from_coeffs(
                order,
                &v.into_iter().map(|(p, q)| rat(p, q)).collect::<Vec<_>>(),
            )
        })
    }

    proptest! {
        #[test]
        fn mul_is_associative(a in arb_series(5), b in arb_series(5), c in arb_series(5)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn exp_sum_inverts(a in arb_series(5)) {
            let mut a = a;
            // force zero constant term
            a = a.shift_up(1);
            let e = a.exp().unwrap();
            let em = (&TruncatedSeries::zero(5) - &a).exp().unwrap();
            prop_assert_eq!(&e * &em, TruncatedSeries::one(5));
        }

        #[test]
        fn inverse_works(a in arb_series(4)) {
            let mut a = a;
            a.coeffs[0] = rat_one();
            let inv = a.inverse().unwrap();
            prop_assert_eq!(&a * &inv, TruncatedSeries::one(4));
        }
    }
}
