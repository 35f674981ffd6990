//! Exact rational numbers and a few integer helpers.
//!
//! Coefficients are [`num_rational::BigRational`], which keeps every value
//! reduced with a positive denominator (zero is `0/1`).

use alloc::string::String;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

/// `num/den` as a rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

pub fn multinomial(parts: &[u32]) -> BigInt {
    let total: u32 = parts.iter().sum();
    parts
        .iter()
        .fold(factorial(total), |acc, &k| acc / factorial(k))
}

/// Always `num/den`, including integers (`3/1`) and zero (`0/1`).
pub fn format_ratio(r: &Rational) -> String {
    alloc::format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den`, or a bare integer.
pub fn parse_ratio(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    from_parts(num, den)
}

/// Builds a rational from decimal numerator and denominator strings.
/// The denominator must be positive; the result is reduced.
pub fn from_parts(num: &str, den: &str) -> Option<Rational> {
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if !den.is_positive() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Decimal strings of the reduced numerator and denominator.
pub fn to_parts(r: &Rational) -> (String, String) {
    use alloc::string::ToString;
    (r.numer().to_string(), r.denom().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(multinomial(&[2, 1, 1]), BigInt::from(12));
    }

    #[test]
    fn formatting_is_always_a_fraction() {
        assert_eq!(format_ratio(&int(3)), "3/1");
        assert_eq!(format_ratio(&Rational::zero()), "0/1");
        assert_eq!(format_ratio(&rat(2, -4)), "-1/2");
        assert_eq!(parse_ratio("-1/2"), Some(rat(-1, 2)));
        assert_eq!(parse_ratio("6/4"), Some(rat(3, 2)));
        assert_eq!(parse_ratio("7"), Some(int(7)));
        assert_eq!(parse_ratio("1/0"), None);
        assert_eq!(from_parts("1", "-2"), None);
    }
}
