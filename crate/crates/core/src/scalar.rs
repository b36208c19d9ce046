//! Scalar fields the algebra is written over.
//!
//! Everything in this crate is generic over [`Field`], a characteristic-zero
//! field with exact arithmetic. The only shipped instance is [`Rational`]
//! (arbitrary-precision rationals); fixed-width rationals are deliberately
//! not provided because elimination on Chevalley–Eilenberg differentials
//! grows intermediate denominators quickly.

use std::fmt;
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

/// Arbitrary-precision rational numbers, always in lowest terms.
pub type Rational = BigRational;

/// An exact field of characteristic zero.
pub trait Field:
    Num
    + Neg<Output = Self>
    + Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    fn from_int(n: i64) -> Self;

    /// `num / den`, or `None` when `den` is zero.
    fn from_bigints(num: BigInt, den: BigInt) -> Option<Self>;

    /// Numerator and denominator in lowest terms, denominator positive.
    fn to_bigints(&self) -> (BigInt, BigInt);

    fn times(&self, other: &Self) -> Self {
        let mut t = self.clone();
        t *= other;
        t
    }

    /// `(-1)^k` as a field element.
    fn sign(odd: bool) -> Self {
        if odd {
            -Self::one()
        } else {
            Self::one()
        }
    }

    /// Always `"num/den"`, also for integers.
    fn to_fraction_string(&self) -> String {
        let (n, d) = self.to_bigints();
        format!("{n}/{d}")
    }

    /// Parses `"a"` or `"a/b"` with optional leading sign.
    fn parse_fraction(s: &str) -> Option<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().ok()?;
        let den: BigInt = den.parse().ok()?;
        Self::from_bigints(num, den)
    }
}

impl Field for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_bigints(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num, den))
        }
    }

    fn to_bigints(&self) -> (BigInt, BigInt) {
        let mut n = self.numer().clone();
        let mut d = self.denom().clone();
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        (n, d)
    }
}

/// True when `k` is odd; works for negative degrees too.
pub fn is_odd(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

/// Parity of `a * b`.
pub fn koszul_odd(a: i64, b: i64) -> bool {
    is_odd(a) && is_odd(b)
}

/// Human formatting of a coefficient: integers without denominator.
pub fn display_coefficient<F: Field>(c: &F) -> String {
    let (n, d) = c.to_bigints();
    if d.is_one() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

/// Least common multiple of the denominators in `coeffs`.
pub fn denominator_lcm<'a, F: Field>(coeffs: impl IntoIterator<Item = &'a F>) -> BigInt {
    let mut acc = BigInt::one();
    for c in coeffs {
        let (_, d) = c.to_bigints();
        let g = gcd(&acc, &d);
        acc = &acc / &g * &d;
    }
    acc
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn lowest_terms_and_strings() {
        let x = q(6, -4);
        assert_eq!(x.to_fraction_string(), "-3/2");
        assert_eq!(Rational::from_int(5).to_fraction_string(), "5/1");
        assert_eq!(display_coefficient(&Rational::from_int(5)), "5");
        assert_eq!(Rational::parse_fraction(" -3/2 "), Some(q(-3, 2)));
        assert_eq!(Rational::parse_fraction("1/0"), None);
        assert_eq!(Rational::parse_fraction("0.5"), None);
    }

    #[test]
    fn parity_helpers() {
        assert!(is_odd(-1));
        assert!(!is_odd(-2));
        assert!(koszul_odd(3, -1));
        assert!(!koszul_odd(2, 1));
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [q(1, 2), q(1, 3), q(5, 1)];
        assert_eq!(denominator_lcm(v.iter()), BigInt::from(6));
    }
}
