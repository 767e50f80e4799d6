//! Exact rational scalars, fractional parts and one-sided limits.
//!
//! Every coordinate, anchor and discrepancy value in this crate is a
//! [`Rational`]. Suprema of the discrepancy over anchors and shifts are in
//! general only approached at breakpoints, so evaluation points carry a
//! [`Side`] telling which one-sided limit is meant.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Fractional part `{x}` in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// How a piecewise function is evaluated at a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Ordinary evaluation.
    At,
    /// Limit as the argument increases to the value.
    LeftLimit,
    /// Limit as the argument decreases to the value.
    RightLimit,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::At => Side::At,
            Side::LeftLimit => Side::RightLimit,
            Side::RightLimit => Side::LeftLimit,
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            Side::At => "",
            Side::LeftLimit => "-",
            Side::RightLimit => "+",
        }
    }
}

/// A rational together with the side from which it is approached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SidedValue {
    pub value: Rational,
    pub side: Side,
}

impl SidedValue {
    pub fn new(value: Rational, side: Side) -> Self {
        SidedValue { value, side }
    }

    pub fn at(value: Rational) -> Self {
        SidedValue { value, side: Side::At }
    }

    pub fn left(value: Rational) -> Self {
        SidedValue { value, side: Side::LeftLimit }
    }

    pub fn right(value: Rational) -> Self {
        SidedValue { value, side: Side::RightLimit }
    }

    /// `self + x`; the side is unchanged.
    pub fn add(&self, x: &Rational) -> SidedValue {
        SidedValue::new(&self.value + x, self.side)
    }

    /// `x - self`: subtracting a value approached from above is approached from below.
    pub fn subtract_from(&self, x: &Rational) -> SidedValue {
        SidedValue::new(x - &self.value, self.side.flip())
    }

    /// Compare against a plain rational, treating the side as an infinitesimal offset.
    pub fn cmp_value(&self, other: &Rational) -> Ordering {
        match self.value.cmp(other) {
            Ordering::Equal => match self.side {
                Side::At => Ordering::Equal,
                Side::LeftLimit => Ordering::Less,
                Side::RightLimit => Ordering::Greater,
            },
            o => o,
        }
    }
}

impl Neg for &SidedValue {
    type Output = SidedValue;
    fn neg(self) -> SidedValue {
        SidedValue::new(-&self.value, self.side.flip())
    }
}

impl From<Rational> for SidedValue {
    fn from(value: Rational) -> Self {
        SidedValue::at(value)
    }
}

impl fmt::Display for SidedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", format_rational(&self.value), self.side.suffix())
    }
}

impl FromStr for SidedValue {
    type Err = Error;

    /// Parses `p/q`, `p/q+` (right limit) or `p/q-` (left limit).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, side) = if let Some(b) = s.strip_suffix('+') {
            (b, Side::RightLimit)
        } else if let Some(b) = s.strip_suffix('-').filter(|b| !b.is_empty()) {
            (b, Side::LeftLimit)
        } else {
            (s, Side::At)
        };
        Ok(SidedValue::new(parse_rational(body)?, side))
    }
}

impl Serialize for SidedValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SidedValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `{x}` with one-sided limits: at an integer the left limit is 1 and the
/// right limit is 0; elsewhere the side flag does not matter.
pub fn frac_sided(x: &SidedValue) -> Rational {
    if is_integer(&x.value) && x.side == Side::LeftLimit {
        Rational::one()
    } else {
        frac(&x.value)
    }
}

/// Canonical `p/q` form, denominator always written.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Round to 17 significant digits, ties to even.
pub fn render_f64(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.16e}").parse().unwrap_or(x)
}

/// Float rendering of an exact value at 17 significant digits.
pub fn render(x: &Rational) -> f64 {
    render_f64(to_f64(x))
}

/// serde adapter for `Rational` fields as `"p/q"` strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// serde adapter for `Option<Rational>`.
pub mod serde_rational_opt {
    use super::*;

    pub fn serialize<S: Serializer>(
        x: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&format_rational(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Bits of the dyadic grid that root bounds are rounded to.
const ROOT_BITS: usize = 128;

fn scaled_floor(x: &Rational, shift: usize) -> BigInt {
    let scaled = x * Rational::from_integer(BigInt::one() << shift);
    scaled.floor().to_integer()
}

/// Largest dyadic `k / 2^128` not exceeding `x^(1/n)`, for `x >= 0`.
pub fn root_floor(x: &Rational, n: u32) -> Rational {
    assert!(n >= 1 && !x.is_negative());
    if n == 1 {
        return x.clone();
    }
    let inner = scaled_floor(x, ROOT_BITS * n as usize);
    Rational::new(inner.nth_root(n), BigInt::one() << ROOT_BITS)
}

/// Smallest dyadic `k / 2^128` not below `x^(1/n)`, for `x >= 0`.
pub fn root_ceil(x: &Rational, n: u32) -> Rational {
    assert!(n >= 1 && !x.is_negative());
    if n == 1 {
        return x.clone();
    }
    let denom = BigInt::one() << ROOT_BITS;
    let scaled = x * Rational::from_integer(BigInt::one() << (ROOT_BITS * n as usize));
    let target = scaled.ceil().to_integer();
    let mut r = target.nth_root(n);
    if r.pow(n) < target {
        r += 1;
    }
    Rational::new(r, denom)
}

pub fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

/// Positive rational exponent `p/r` split into `(p, r)` as machine integers.
pub fn exponent_parts(q: &Rational) -> Result<(u32, u32)> {
    if !q.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "exponent must be positive, got {}",
            format_rational(q)
        )));
    }
    let p = q.numer().to_u32();
    let r = q.denom().to_u32();
    match (p, r) {
        (Some(p), Some(r)) if p <= 64 && r <= 64 => Ok((p, r)),
        _ => Err(Error::InvalidParameter(format!(
            "exponent {} too large for exact bounds",
            format_rational(q)
        ))),
    }
}

/// Certified lower and upper dyadic bounds on `x^e` for `x >= 0` and rational `e > 0`.
pub fn pow_bounds(x: &Rational, e: &Rational) -> Result<(Rational, Rational)> {
    let (p, r) = exponent_parts(e)?;
    let xp = pow(x, p);
    Ok((root_floor(&xp, r), root_ceil(&xp, r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_examples() {
        assert_eq!(frac(&rat(7, 3)), rat(1, 3));
        assert_eq!(frac(&rat(-1, 4)), rat(3, 4));
        assert_eq!(frac(&int(1)), int(0));
        assert_eq!(frac(&int(-3)), int(0));
    }

    #[test]
    fn frac_sided_examples() {
        assert_eq!(frac_sided(&SidedValue::left(int(1))), int(1));
        assert_eq!(frac_sided(&SidedValue::right(int(1))), int(0));
        assert_eq!(frac_sided(&SidedValue::left(rat(1, 2))), rat(1, 2));
        assert_eq!(frac_sided(&SidedValue::at(int(2))), int(0));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rat(6, -8)), "-3/4");
        assert_eq!(format_rational(&int(0)), "0/1");
        assert_eq!(parse_rational(" 6/8 ").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn sided_strings() {
        let v: SidedValue = "1/2+".parse().unwrap();
        assert_eq!(v, SidedValue::right(rat(1, 2)));
        let v: SidedValue = "-1/2-".parse().unwrap();
        assert_eq!(v, SidedValue::left(rat(-1, 2)));
        let v: SidedValue = "-1/2".parse().unwrap();
        assert_eq!(v, SidedValue::at(rat(-1, 2)));
        assert_eq!(SidedValue::left(int(1)).to_string(), "1/1-");
    }

    #[test]
    fn sided_arithmetic_flips() {
        let y = SidedValue::right(rat(1, 4));
        let d = y.subtract_from(&rat(1, 2));
        assert_eq!(d, SidedValue::left(rat(1, 4)));
        assert_eq!(y.cmp_value(&rat(1, 4)), Ordering::Greater);
    }

    #[test]
    fn roots_bracket() {
        let two = int(2);
        let lo = root_floor(&two, 2);
        let hi = root_ceil(&two, 2);
        assert!(pow(&lo, 2) <= two && pow(&hi, 2) >= two);
        assert!(&hi - &lo <= Rational::new(BigInt::one(), BigInt::one() << 127));
        assert_eq!(root_floor(&rat(1, 4), 2), rat(1, 2));
        assert_eq!(root_ceil(&rat(1, 4), 2), rat(1, 2));
    }

    #[test]
    fn render_rounds_to_17_digits() {
        assert_eq!(render(&rat(1, 3)), 1.0 / 3.0);
        assert_eq!(render_f64(0.1), 0.1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn frac_is_periodic_and_in_unit_interval(p in -1000i64..1000, q in 1i64..60, m in -20i64..20) {
                let x = rat(p, q);
                let f = frac(&x);
                prop_assert!(f >= int(0) && f < int(1));
                prop_assert!(is_integer(&(&x - &f)));
                prop_assert_eq!(frac(&(&x + int(m))), f);
            }

            #[test]
            fn sided_frac_agrees_off_integers(p in -1000i64..1000, q in 2i64..60) {
                let x = rat(p, q);
                prop_assume!(!is_integer(&x));
                let f = frac(&x);
                prop_assert_eq!(frac_sided(&SidedValue::left(x.clone())), f.clone());
                prop_assert_eq!(frac_sided(&SidedValue::right(x)), f);
            }
        }
    }
}
