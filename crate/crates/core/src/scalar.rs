//! Exact rationals, logarithmic Weil heights and the Liouville inequality over Q.
//!
//! Every scalar in the crate is a [`Rational`]. Logarithms are only ever used for
//! reporting; every inequality that matters is decided on integers.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary precision fraction in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Relative error certified for every logarithm produced by this module.
pub const LOG_REL_ERROR: f64 = 1e-13;

/// Natural-log value together with a certified error bound:
/// `|value - true| <= certified_rel_error * max(1, |true|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub value: f64,
    pub certified_rel_error: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { value: 0.0, certified_rel_error: 0.0 };

    pub fn new(value: f64, certified_rel_error: f64) -> Self {
        LogValue { value, certified_rel_error }
    }

    /// Absolute error bound implied by the certificate.
    pub fn abs_error(&self) -> f64 {
        self.certified_rel_error * self.value.abs().max(1.0)
    }

    /// True when `other` lies within the combined certified error of `self`
    /// plus `slack` (absolute).
    pub fn agrees_with(&self, other: f64, slack: f64) -> bool {
        (self.value - other).abs() <= self.abs_error() + slack
    }

    /// Sum of non-negative log values with a propagated certificate.
    pub fn sum_nonneg<I: IntoIterator<Item = LogValue>>(terms: I) -> LogValue {
        let mut total = 0.0f64;
        let mut err = 0.0f64;
        let mut count = 0u32;
        for t in terms {
            total += t.value;
            err += t.abs_error();
            count += 1;
        }
        // one rounding per addition
        err += f64::EPSILON * total.abs() * f64::from(count.max(1));
        let rel = if total.abs() > 1.0 { err / total.abs() } else { err };
        LogValue { value: total, certified_rel_error: rel }
    }

    fn scaled(self, factor: u32) -> LogValue {
        let value = self.value * f64::from(factor);
        LogValue {
            value,
            certified_rel_error: self.certified_rel_error + f64::EPSILON,
        }
    }
}

fn round_sig15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

impl Serialize for LogValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("LogValue", 2)?;
        s.serialize_field("value", &round_sig15(self.value))?;
        s.serialize_field("certified_rel_error", &self.certified_rel_error)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for LogValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            value: f64,
            certified_rel_error: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        Ok(LogValue { value: raw.value, certified_rel_error: raw.certified_rel_error })
    }
}

/// Parses `"p/q"` or `"p"` (optional leading sign, decimal digits only).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let valid_int = |t: &str, signed: bool| {
        let digits = if signed { t.strip_prefix(['-', '+']).unwrap_or(t) } else { t };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num, true) {
        return Err(bad());
    }
    let n = BigInt::from_str(num.trim_start_matches('+')).map_err(|_| bad())?;
    let d = match den {
        Some(d) => {
            if !valid_int(d, false) {
                return Err(bad());
            }
            BigInt::from_str(d).map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Canonical decimal form: `"p/q"`, or `"p"` when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Multiplicative height `max(|p|, |q|)` of a reduced fraction.
pub fn exp_height(r: &Rational) -> BigUint {
    let p = r.numer().magnitude();
    let q = r.denom().magnitude();
    if p > q { p.clone() } else { q.clone() }
}

/// Certified `ln(n / d)` for positive integers, computed from a 64-bit
/// scaled quotient and the bit-length difference.
pub fn ln_ratio(n: &BigUint, d: &BigUint) -> LogValue {
    assert!(!n.is_zero() && !d.is_zero(), "ln_ratio of zero");
    if n == d {
        return LogValue::ZERO;
    }
    let shift = 64i64 - (n.bits() as i64 - d.bits() as i64);
    let t = if shift >= 0 {
        (n << shift as u64) / d
    } else {
        n / (d << (-shift) as u64)
    };
    let tf = t.to_f64().unwrap_or(f64::INFINITY);
    let value = tf.ln() - (shift as f64) * std::f64::consts::LN_2;
    LogValue { value, certified_rel_error: LOG_REL_ERROR }
}

/// Certified `ln(n)` of a positive integer.
pub fn ln_int(n: &BigUint) -> LogValue {
    ln_ratio(n, &BigUint::one())
}

/// Certified `log|r|`, never materializing `|r|` as a float.
pub fn log_abs(r: &Rational) -> Result<LogValue> {
    if r.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(ln_ratio(r.numer().magnitude(), r.denom().magnitude()))
}

/// Absolute logarithmic Weil height; over Q this is `log max(|p|, |q|)`.
pub fn weil_height(r: &Rational) -> LogValue {
    if r.is_zero() {
        return LogValue::ZERO;
    }
    ln_int(&exp_height(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiouvilleReport {
    pub holds: bool,
    /// `log|r| + h(r)`, which is `>= 0` whenever `holds`.
    pub slack: LogValue,
}

/// Liouville inequality `log|r| >= -h(r)` for a nonzero rational, decided as
/// the integer inequality `|p| * max(|p|, q) >= q`.
pub fn liouville_check(r: &Rational) -> Result<LiouvilleReport> {
    if r.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p = r.numer().magnitude();
    let q = r.denom().magnitude();
    let lhs = p * exp_height(r);
    let holds = &lhs >= q;
    let mut slack = ln_ratio(&lhs, q);
    if holds && slack.value < 0.0 {
        slack.value = 0.0;
    }
    Ok(LiouvilleReport { holds, slack })
}

/// Upper bound for `h(P(beta_1, ..., beta_n))`:
/// `sum log(1 + deg_i) + sum deg_i h(beta_i) + sum h(a_k)`.
pub fn poly_eval_height_bound(
    degrees: &[u32],
    coeff_heights: &[LogValue],
    arg_heights: &[LogValue],
) -> Result<LogValue> {
    if degrees.len() != arg_heights.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} degrees for {} arguments",
            degrees.len(),
            arg_heights.len()
        )));
    }
    let mut terms = Vec::with_capacity(2 * degrees.len() + coeff_heights.len());
    for (&deg, h) in degrees.iter().zip(arg_heights) {
        if deg > 0 {
            terms.push(ln_int(&BigUint::from(1u64 + u64::from(deg))));
            terms.push(h.scaled(deg));
        }
    }
    terms.extend(coeff_heights.iter().copied());
    Ok(LogValue::sum_nonneg(terms))
}

/// `base^exp` for a rational base and a non-negative exponent.
pub fn rat_pow(base: &Rational, exp: u64) -> Rational {
    let n = num_traits::pow::pow(base.numer().clone(), exp as usize);
    let d = num_traits::pow::pow(base.denom().clone(), exp as usize);
    // already coprime
    Rational::new_raw(n, d)
}

/// `|r|` compared with 1 as a cheap exact test.
pub fn abs_lt_one(r: &Rational) -> bool {
    r.numer().magnitude() < r.denom().magnitude()
}

pub fn rat_abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Common denominator of a slice of rationals (positive).
pub fn lcm_denominators<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Number of bits of `max(|p|, |q|)`, the size proxy used by exact budgets.
pub fn bit_size(r: &Rational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}


/// Serde adapters that keep rationals as exact decimal strings.
pub mod serde_rational {
    use super::*;
    use serde::de::Error as _;

    pub fn serialize<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(format_rational))
        }

        pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|t| parse_rational(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
            let raw = Option::<String>::deserialize(d)?;
            raw.map(|t| parse_rational(&t).map_err(D::Error::custom)).transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn weil_height_examples() {
        assert_eq!(weil_height(&int(0)).value, 0.0);
        assert!(weil_height(&frac(3, 2)).agrees_with(3f64.ln(), 0.0));
        assert!(weil_height(&frac(1, 256)).agrees_with(8.0 * LN_2, 0.0));
    }

    #[test]
    fn liouville_examples() {
        let r = liouville_check(&frac(3, 7)).unwrap();
        assert!(r.holds);
        assert!(r.slack.agrees_with(3f64.ln(), 0.0));
        for x in [int(-1), frac(1, 5)] {
            let r = liouville_check(&x).unwrap();
            assert!(r.holds);
            assert_eq!(r.slack.value, 0.0);
        }
        assert_eq!(liouville_check(&int(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn log_abs_examples() {
        assert!(log_abs(&frac(1, 2)).unwrap().agrees_with(-LN_2, 0.0));
        let big = Rational::from_integer(BigInt::one() << 1000u32);
        assert!(log_abs(&big).unwrap().agrees_with(1000.0 * LN_2, 0.0));
        // mpmath at 30 digits: -0.847297860387203613710107506521
        assert!(log_abs(&frac(3, 7)).unwrap().agrees_with(-0.847_297_860_387_203_6, 1e-16));
        assert_eq!(log_abs(&int(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn height_bound_examples() {
        let h = |r: &Rational| weil_height(r);
        let b = poly_eval_height_bound(&[1, 1], &[h(&int(1))], &[h(&int(2)), h(&int(3))]).unwrap();
        assert!(b.agrees_with(3.0 * LN_2 + 3f64.ln(), 1e-15));
        let c = poly_eval_height_bound(&[], &[h(&frac(5, 3))], &[]).unwrap();
        assert!(c.agrees_with(5f64.ln(), 1e-15));
        let sq = poly_eval_height_bound(&[2], &[h(&int(1))], &[h(&frac(1, 2))]).unwrap();
        assert!(sq.agrees_with(3f64.ln() + 2.0 * LN_2, 1e-15));
        assert!(weil_height(&frac(1, 4)).value <= sq.value);
        assert!(poly_eval_height_bound(&[1], &[], &[]).is_err());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert_eq!(format_rational(&frac(-3, 2)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
        for bad in ["1e3", "0.5", "1/0", "", "/3", "1/-2", "x"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn huge_ratio_log_is_certified() {
        // (2^5000 + 1) / 2^5000 is within 2^-5000 of 1
        let d = BigUint::one() << 5000u32;
        let n = &d + 1u32;
        let l = ln_ratio(&n, &d);
        assert!(l.value.abs() <= l.abs_error());
    }
}
