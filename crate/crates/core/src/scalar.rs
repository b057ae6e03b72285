//! Scalar types usable as finite distances.
//!
//! Every construction in this crate only needs `min`, `max`, `+`, scaling and
//! comparisons, so any ordered field works. The exact default is
//! [`Rational`](crate::Rational); `f64`/`f32` are supported for quick
//! experiments where rounding is acceptable.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Ordered scalar field used for distances and equation bounds.
pub trait Scalar:
    Num + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Parses a nonnegative literal: integer (`"2"`), decimal (`"1.5"`,
    /// `"2.5e-3"`) or fraction (`"3/2"`). Decimals are read exactly when the
    /// scalar type allows it.
    fn from_literal(text: &str) -> Option<Self>;

    /// Decimal rendering with `digits` fractional digits (truncated).
    fn to_decimal(&self, digits: usize) -> String;

    /// Lossy conversion, used only for display and sampling.
    fn to_f64_lossy(&self) -> f64;
}

/// Parses a nonnegative literal into an exact big rational.
pub fn parse_exact(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_exact(num)?;
        let den = parse_exact(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(num / den);
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = text[pos + 1..].parse().ok()?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

fn rational_decimal<T>(value: &Ratio<T>, digits: usize) -> String
where
    T: Clone + Integer + Signed + fmt::Display + From<u8>,
{
    let negative = value.is_negative();
    let value = value.abs();
    let (int, mut rem) = value.numer().div_rem(value.denom());
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int.to_string());
    if digits > 0 {
        out.push('.');
        let ten = T::from(10u8);
        for _ in 0..digits {
            rem = rem * ten.clone();
            let (d, r) = rem.div_rem(value.denom());
            out.push_str(&d.to_string());
            rem = r;
        }
    }
    out
}

impl Scalar for BigRational {
    fn from_literal(text: &str) -> Option<Self> {
        parse_exact(text)
    }

    fn to_decimal(&self, digits: usize) -> String {
        rational_decimal(self, digits)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for Ratio<i64> {
    fn from_literal(text: &str) -> Option<Self> {
        let exact = parse_exact(text)?;
        Some(Ratio::new(exact.numer().to_i64()?, exact.denom().to_i64()?))
    }

    fn to_decimal(&self, digits: usize) -> String {
        rational_decimal(self, digits)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn from_literal(text: &str) -> Option<Self> {
                let exact = parse_exact(text)?;
                let num: $t = exact.numer().to_string().parse().ok()?;
                let den: $t = exact.denom().to_string().parse().ok()?;
                Some(num / den)
            }

            fn to_decimal(&self, digits: usize) -> String {
                format!("{:.*}", digits, self)
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
    )*};
}

float_scalar!(f32, f64);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_literals() {
        assert_eq!(parse_exact("3/2"), Some(q(3, 2)));
        assert_eq!(parse_exact("1.5"), Some(q(3, 2)));
        assert_eq!(parse_exact("0.25"), Some(q(1, 4)));
        assert_eq!(parse_exact("2"), Some(q(2, 1)));
        assert_eq!(parse_exact(".5"), Some(q(1, 2)));
        assert_eq!(parse_exact("2.5e-1"), Some(q(1, 4)));
        assert_eq!(parse_exact("1e2"), Some(q(100, 1)));
        assert_eq!(parse_exact("0.1"), Some(q(1, 10)));
        assert_eq!(parse_exact("0.5/2"), Some(q(1, 4)));
    }

    #[test]
    fn rejected_literals() {
        for bad in ["", "-1", "1/0", "abc", "1..2", "inf", ".", "1/", "e3"] {
            assert_eq!(parse_exact(bad), None, "{bad}");
        }
    }

    #[test]
    fn small_ratio_and_float() {
        assert_eq!(Ratio::<i64>::from_literal("0.75"), Some(Ratio::new(3, 4)));
        assert_eq!(f64::from_literal("1/4"), Some(0.25));
        assert_eq!(f64::from_literal("3"), Some(3.0));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q(1, 3).to_decimal(4), "0.3333");
        assert_eq!(q(7, 2).to_decimal(0), "3");
        assert_eq!(q(1, 8).to_decimal(3), "0.125");
        assert_eq!(0.5f64.to_decimal(2), "0.50");
    }
}
