//! Integer arithmetic over a common denominator.
//!
//! The enumeration kernels rescale all coordinates of a configuration to
//! integers over one denominator `Q`. They are generic over [`ExactInt`] so
//! that small problems run on `i128` and everything else on `BigInt`; the
//! caller picks the type from an a-priori magnitude bound.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive};

use crate::scalar::Rational;

pub(crate) trait ExactInt:
    Clone + Ord + Num + Signed + From<i64> + Send + Sync + Debug + 'static
{
    fn from_big(b: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
}

impl ExactInt for i128 {
    fn from_big(b: &BigInt) -> Self {
        b.to_i128().expect("magnitude bound checked by caller")
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn from_big(b: &BigInt) -> Self {
        b.clone()
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Headroom kept below `i128::MAX` for intermediate sums.
const I128_SAFE_BITS: u64 = 120;

/// Whether a quantity bounded by `2^bits` is safe to accumulate in `i128`.
pub(crate) fn fits_i128(bits: u64) -> bool {
    bits <= I128_SAFE_BITS
}

pub(crate) fn bits_of(x: &BigInt) -> u64 {
    x.bits()
}

pub(crate) fn bits_of_usize(n: usize) -> u64 {
    (usize::BITS - n.leading_zeros()) as u64
}

/// Least common denominator of a collection of rationals.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Numerator of `x` over the denominator `q` (which must be a multiple of `x`'s).
pub(crate) fn scale(x: &Rational, q: &BigInt) -> BigInt {
    x.numer() * (q / x.denom())
}

pub(crate) fn pow_t<T: ExactInt>(base: &T, e: usize) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn denominators() {
        let xs = [rat(1, 4), rat(5, 6), rat(0, 1)];
        let q = common_denominator(xs.iter());
        assert_eq!(q, BigInt::from(12));
        assert_eq!(scale(&xs[1], &q), BigInt::from(10));
    }

    #[test]
    fn bit_counts() {
        assert_eq!(bits_of_usize(16), 5);
        assert_eq!(bits_of_usize(0), 0);
        assert!(fits_i128(100) && !fits_i128(121));
    }
}
