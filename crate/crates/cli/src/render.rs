//! Output rendering: exact rationals with fixed-precision decimals, and the
//! text/JSON/CSV views of each report.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};

/// Significant digits used for every decimal rendering of an exact rational.
pub const DECIMAL_SIG_DIGITS: usize = 12;

/// Decimal rendering of `r` to [`DECIMAL_SIG_DIGITS`] significant digits,
/// round-half-up. Exact rationals stay exact in the reports; this is the
/// human-readable companion.
pub fn decimal(r: &BigRational) -> String {
    decimal_sig(r, DECIMAL_SIG_DIGITS)
}

pub fn decimal_sig(r: &BigRational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let num = r.numer().abs();
    let den = r.denom().clone();

    // Position of the leading digit relative to the decimal point:
    // exp >= 1 means `exp` integer digits; exp <= 0 means the first
    // significant digit sits `-exp` places after the point.
    let int_part = &num / &den;
    let mut exp: i64 = if int_part.is_zero() {
        let mut shifted = num.clone();
        let mut e = 0i64;
        while shifted < den {
            shifted *= 10;
            e -= 1;
        }
        e + 1
    } else {
        int_part.to_string().len() as i64
    };

    // Scale so that exactly `sig` digits land left of the division, then
    // round half-up on the remainder.
    let shift = sig as i64 - exp;
    let (scaled_num, scaled_den) = if shift >= 0 {
        (num * BigInt::from(10u32).pow(shift as u32), den)
    } else {
        (num, den * BigInt::from(10u32).pow((-shift) as u32))
    };
    let (mut q, rem) = (&scaled_num / &scaled_den, &scaled_num % &scaled_den);
    if &rem * 2 >= scaled_den {
        q += 1;
    }
    let mut digits = q.to_string();
    if digits.len() > sig {
        // Rounding carried into a new leading digit (e.g. 999.. -> 1000..).
        debug_assert!(digits.ends_with('0'));
        digits.truncate(sig);
        exp += 1;
    }
    debug_assert_eq!(digits.len(), sig);

    if exp >= 1 {
        let e = exp as usize;
        if e >= sig {
            // All significant digits are integer digits; pad with zeros.
            format!("{sign}{digits}{}", "0".repeat(e - sig))
        } else {
            format!("{sign}{}.{}", &digits[..e], &digits[e..])
        }
    } else {
        format!("{sign}0.{}{digits}", "0".repeat((-exp) as usize))
    }
}

/// `exact (≈ decimal)` pair used throughout the text reports.
pub fn rational_pair(r: &BigRational) -> String {
    format!("{} (~ {})", r, decimal(r))
}

/// JSON value for a rational: exact string plus decimal rendering.
pub fn rational_json(r: &BigRational) -> serde_json::Value {
    serde_json::json!({ "exact": r.to_string(), "decimal": decimal(r) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integers_pad_to_twelve_digits() {
        assert_eq!(decimal(&rat(5, 1)), "5.00000000000");
        assert_eq!(decimal(&rat(13, 1)), "13.0000000000");
        assert_eq!(decimal(&rat(-6, 1)), "-6.00000000000");
        assert_eq!(decimal(&rat(0, 1)), "0");
    }

    #[test]
    fn repeating_fractions_round_half_up() {
        assert_eq!(decimal(&rat(1, 3)), "0.333333333333");
        assert_eq!(decimal(&rat(2, 3)), "0.666666666667");
        assert_eq!(decimal(&rat(49, 6)), "8.16666666667");
        assert_eq!(decimal(&rat(-49, 6)), "-8.16666666667");
    }

    #[test]
    fn small_magnitudes_keep_leading_zeros() {
        assert_eq!(decimal(&rat(1, 400)), "0.00250000000000");
        assert_eq!(decimal_sig(&rat(1, 7), 3), "0.143");
    }

    #[test]
    fn rounding_can_carry_into_a_new_digit() {
        // 0.9999999999995 rounds up to 1.00000000000 at 12 digits.
        let r = rat(9_999_999_999_995, 10_000_000_000_000);
        assert_eq!(decimal(&r), "1.00000000000");
        assert_eq!(decimal_sig(&rat(995, 1000), 2), "1.0");
    }

    #[test]
    fn large_integers_extend_past_the_digit_window() {
        let r = BigRational::from_i128(123_456_789_012_345).unwrap();
        assert_eq!(decimal(&r), "123456789012000");
    }
}
