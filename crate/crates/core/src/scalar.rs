//! Exact rational scalars.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serializer;

use crate::error::ParseError;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(s: &Scalar) -> f64 {
    s.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p`, `p/q`, `+p/q` or `-p/q`.
pub fn parse(text: &str) -> Result<Scalar, ParseError> {
    let t = text.trim();
    let bad = || ParseError::new(0, 0, format!("not a rational number: `{text}`"));
    let t = t.strip_prefix('+').unwrap_or(t);
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(ParseError::new(
            0,
            0,
            format!("zero denominator in `{text}`"),
        ));
    }
    Ok(Scalar::new(num, den))
}

/// `p/q` in lowest terms, integers without denominator.
pub fn format(s: &Scalar) -> String {
    s.to_string()
}

/// Explicitly signed form used in form files: `+1`, `-3/2`.
pub fn format_signed(s: &Scalar) -> String {
    if s.is_negative() {
        s.to_string()
    } else {
        format!("+{s}")
    }
}

/// Exact square root when `s` is the square of a rational.
pub fn sqrt_exact(s: &Scalar) -> Option<Scalar> {
    if s.is_negative() {
        return None;
    }
    let n = s.numer().sqrt();
    let d = s.denom().sqrt();
    (&n * &n == *s.numer() && &d * &d == *s.denom()).then(|| Scalar::new(n, d))
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents).
pub fn rationalize(x: f64, max_den: i64) -> Option<Scalar> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some(Scalar::new(BigInt::from(h1), BigInt::from(k1)))
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub(crate) fn serialize<S: Serializer>(s: &Scalar, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&format(s))
}

pub(crate) fn serialize_vec<S: Serializer>(v: &[Scalar], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(v.iter().map(format))
}

pub(crate) fn serialize_opt<S: Serializer>(v: &Option<Scalar>, ser: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(s) => ser.serialize_some(&format(s)),
        None => ser.serialize_none(),
    }
}

pub(crate) fn serialize_matrix<S: Serializer>(
    m: &crate::linalg::QMatrix,
    ser: S,
) -> Result<S::Ok, S::Error> {
    ser.collect_seq((0..m.rows()).map(|i| m.row(i).iter().map(format).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("+3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert_eq!(format(&ratio(-14, 4)), "-7/2");
        assert_eq!(format_signed(&int(1)), "+1");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn exact_roots() {
        assert_eq!(sqrt_exact(&ratio(49, 4)), Some(ratio(7, 2)));
        assert_eq!(sqrt_exact(&ratio(1, 2)), None);
        assert_eq!(sqrt_exact(&int(-4)), None);
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(rationalize(6.0 / 7.0 + 1e-13, 1000), Some(ratio(6, 7)));
        assert_eq!(rationalize(-8.0 / 7.0, 1000), Some(ratio(-8, 7)));
        assert_eq!(rationalize(0.0, 10), Some(int(0)));
    }
}
