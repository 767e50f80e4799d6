//! Expansion of a shifted local discrepancy into unshifted ones.
//!
//! For `y in [0, 1]`, `z in [0, 1)` and carry `delta = [y + z >= 1]`,
//!
//! ```text
//! chi(x - z, y) = chi(x, y + z)(1 - delta) + chi(x, y + z - 1) delta - chi(x, z) + chi(x, 1) delta
//! ```
//!
//! and `v(y)` obeys the same expansion, so `L(X - Z, Y)` is a signed sum of at
//! most `3^d` terms `L(X, V_k)`. A shift `D + Z` is handled by expanding with
//! `{-Z}`.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::functions::set_l;
use super::types::{Anchor, PointSet, ShiftVector};
use crate::error::Result;
use crate::scalar::{frac, Rational, Side, SidedValue};

/// Carry indicator `delta_{y,z} = [y + z >= 1]`, respecting the side of `y`.
pub fn carry_indicator(y: &SidedValue, z: &Rational) -> bool {
    y.add(z).cmp_value(&Rational::one()) != Ordering::Less
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiTerm {
    pub coefficient: i32,
    pub anchor: SidedValue,
}

/// An anchor at exactly 0 (or approached from below) gives an empty box and
/// zero volume, so its term vanishes identically.
fn is_null_anchor(y: &SidedValue) -> bool {
    y.value.is_zero() && y.side != Side::RightLimit
}

/// Nonzero terms `(c_k, v_k)` with `chi(x - z, y) = sum_k c_k chi(x, v_k)`
/// for every `x`; at most three of them.
pub fn shift_decompose_chi(y: &SidedValue, z: &Rational) -> Vec<ChiTerm> {
    let carry = carry_indicator(y, z);
    let mut terms = Vec::with_capacity(3);
    if carry {
        terms.push(ChiTerm { coefficient: 1, anchor: y.add(&(z - Rational::one())) });
    } else {
        terms.push(ChiTerm { coefficient: 1, anchor: y.add(z) });
    }
    terms.push(ChiTerm { coefficient: -1, anchor: SidedValue::at(z.clone()) });
    if carry {
        terms.push(ChiTerm { coefficient: 1, anchor: SidedValue::at(Rational::one()) });
    }
    terms.retain(|t| !is_null_anchor(&t.anchor));
    terms
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftTerm {
    pub coefficient: i32,
    pub anchor: Anchor,
}

/// Terms `(c_k, V_k)` with `L[D + Z, Y] = sum_k c_k L[D, V_k]`; the
/// coefficients and anchors do not depend on `D`.
pub fn set_shift_decomposition(dim: usize, y: &Anchor, z: &ShiftVector) -> Result<Vec<ShiftTerm>> {
    if y.dim() != dim || z.dim() != dim {
        return Err(crate::error::Error::DimensionMismatch {
            expected: dim,
            found: if y.dim() != dim { y.dim() } else { z.dim() },
        });
    }
    let per_coord: Vec<Vec<ChiTerm>> = y
        .coords()
        .iter()
        .zip(z.coords())
        .map(|(yk, zk)| shift_decompose_chi(yk, &frac(&-&zk.value)))
        .collect();

    let mut out = vec![(1i32, Vec::with_capacity(dim))];
    for terms in &per_coord {
        let mut next = Vec::with_capacity(out.len() * terms.len());
        for (c, prefix) in &out {
            for t in terms {
                let mut anchor = prefix.clone();
                anchor.push(t.anchor.clone());
                next.push((c * t.coefficient, anchor));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(coefficient, coords)| Ok(ShiftTerm { coefficient, anchor: Anchor::new(coords)? }))
        .collect()
}

/// `sum_k c_k L[D, V_k]` for the terms of [`set_shift_decomposition`].
pub fn reconstruct_shifted(d: &PointSet, terms: &[ShiftTerm]) -> Rational {
    terms
        .iter()
        .map(|t| Rational::from_integer(t.coefficient.into()) * set_l(d, &t.anchor))
        .sum()
}
