//! Exact-arithmetic helpers shared by the closed forms.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn q<T: Into<BigInt>>(x: T) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `base^exp` for any integer exponent; negative exponents give the reciprocal.
pub fn pow_q(base: i64, exp: i64) -> BigRational {
    let b = q(base);
    if exp >= 0 {
        Pow::pow(&b, exp as u64)
    } else {
        assert!(base != 0, "0 raised to a negative power");
        Pow::pow(&b.recip(), exp.unsigned_abs())
    }
}

/// Converts a formula result to a natural number, failing loudly if a
/// transcription error left a fractional or negative value.
pub fn to_natural(value: &BigRational, formula: &'static str) -> Result<BigUint> {
    if !value.is_integer() || value.is_negative() {
        return Err(Error::FormulaNonIntegral {
            formula,
            value: value.to_string(),
        });
    }
    Ok(value
        .to_integer()
        .to_biguint()
        .expect("checked non-negative"))
}

pub fn ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn ratio_of(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Formats `x` like C's `%.{digits}g`, rounding the exact value half away
/// from zero.
pub fn format_sig(x: &BigRational, digits: usize) -> String {
    assert!(digits >= 1);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let a = x.abs();
    let ten = BigInt::from(10);

    // Decimal exponent: 10^e <= a < 10^(e+1).
    let numer_digits = a.numer().to_string().len() as i64;
    let denom_digits = a.denom().to_string().len() as i64;
    let mut e = numer_digits - denom_digits;
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            q(Pow::pow(&ten, k as u64))
        } else {
            q(Pow::pow(&ten, k.unsigned_abs())).recip()
        }
    };
    while a < pow10(e) {
        e -= 1;
    }
    while a >= pow10(e + 1) {
        e += 1;
    }

    let scaled = &a * pow10(digits as i64 - 1 - e);
    let (quot, rem) = scaled.numer().div_rem(scaled.denom());
    let mut n = quot;
    if rem * 2 >= *scaled.denom() {
        n += 1;
    }
    if n == Pow::pow(&ten, digits as u64) {
        n /= 10;
        e += 1;
    }
    let s = n.to_string();
    debug_assert_eq!(s.len(), digits);

    let body = if (-4..digits as i64).contains(&e) {
        if e >= 0 {
            let e = e as usize;
            let frac = s[e + 1..].trim_end_matches('0');
            if frac.is_empty() {
                s[..e + 1].to_string()
            } else {
                format!("{}.{frac}", &s[..e + 1])
            }
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            format!("0.{zeros}{}", s.trim_end_matches('0'))
        }
    } else {
        let frac = s[1..].trim_end_matches('0');
        let mantissa = if frac.is_empty() {
            s[..1].to_string()
        } else {
            format!("{}.{frac}", &s[..1])
        };
        format!("{mantissa}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}
