//! Exact rational helpers shared by the label and confidence syntaxes.

use num::bigint::Sign;
use num::traits::{One, Signed, Zero};
use num::{BigInt, BigRational, Integer};

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Nearest integer, halves rounded away from zero.
pub fn round_half_away(value: &Rational) -> BigInt {
    value.round().to_integer()
}

/// Parses `12`, `-3`, `0.35`, `.5` or `7/3` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = num::pow(BigInt::from(10u32), frac.len());
    let value = Rational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Terminating rationals print as decimals (`0.3`, `1.1`, `2`); anything else
/// prints as a reduced fraction (`8/3`).
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        return value.to_integer().to_string();
    }
    let denom = value.denom().clone();
    let mut rest = denom.clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    while rest.is_even() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", value.numer(), denom);
    }
    let places = twos.max(fives);
    let scale = num::pow(BigInt::from(10u32), places);
    let scaled = (value * Rational::from_integer(scale)).to_integer();
    let sign = if scaled.sign() == Sign::Minus {
        "-"
    } else {
        ""
    };
    let digits = scaled.abs().to_string();
    let digits = format!("{:0>width$}", digits, width = places + 1);
    let (whole, frac) = digits.split_at(digits.len() - places);
    format!("{sign}{whole}.{frac}")
}

pub fn is_zero(value: &Rational) -> bool {
    value.is_zero()
}

pub fn is_negative(value: &Rational) -> bool {
    value.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_rational("0.3"), Some(ratio(3, 10)));
        assert_eq!(parse_rational("1.1"), Some(ratio(11, 10)));
        assert_eq!(parse_rational("-2"), Some(int(-2)));
        assert_eq!(parse_rational(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("16/6"), Some(ratio(8, 3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("0.3x"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn formatting_prefers_decimals() {
        assert_eq!(format_rational(&ratio(3, 10)), "0.3");
        assert_eq!(format_rational(&ratio(9, 20)), "0.45");
        assert_eq!(format_rational(&ratio(-1, 40)), "-0.025");
        assert_eq!(format_rational(&int(4)), "4");
        assert_eq!(format_rational(&ratio(16, 6)), "8/3");
    }

    #[test]
    fn rounding_ties_go_away_from_zero() {
        assert_eq!(round_half_away(&ratio(5, 2)), BigInt::from(3));
        assert_eq!(round_half_away(&ratio(-5, 2)), BigInt::from(-3));
        assert_eq!(round_half_away(&ratio(16, 6)), BigInt::from(3));
        assert_eq!(round_half_away(&ratio(4, 9)), BigInt::from(0));
    }
}
