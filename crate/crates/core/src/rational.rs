//! Exact rationals read from decimal literals.

use alloc::string::String;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

pub type Rational = num_rational::BigRational;

/// Parses `[-]digits[.digits]` exactly. Returns `None` on anything else.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut all = String::from(int_part);
    all.push_str(frac_part);
    let numer: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().ok()?
    };
    let denom: BigInt = Pow::pow(BigInt::from(10u8), frac_part.len());
    let value = Rational::new(numer, denom);
    Some(if negative { -value } else { value })
}

pub fn is_integer(value: &Rational) -> bool {
    value.denom().is_one()
}
