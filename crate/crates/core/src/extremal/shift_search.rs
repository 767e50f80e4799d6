//! Suprema over torus shifts.
//!
//! Between consecutive shift breakpoints no shifted coordinate wraps, so every
//! shifted fractional part is affine with slope 1 in `z_j`. On such a cell
//! both `lambda_J[D + Z]` and every grid candidate of `L[D + Z, .]` are
//! multilinear in `Z`; their suprema over the cell are reached at its
//! vertices, approached from inside. Each breakpoint is therefore visited
//! twice, once as the left end of the cell above it (`At`, which equals the
//! limit from above) and once as the right end of the cell below it (left
//! limit).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::grid::{linf_of_coords, GridBest};
use super::{EnumerationBudget, ExtremalResult, LambdaMode};
use crate::error::{Result, SearchKind};
use crate::exact_int::{bits_of, bits_of_usize, common_denominator, fits_i128, pow_t, scale, ExactInt};
use crate::kernel::{mean_lambda_sided, IndexSubset, PointSet, ShiftVector};
use crate::scalar::{frac, Rational, Side, SidedValue};

/// `B_j = {(1 - {x_ij}) mod 1} ∪ {0}` for each `j in J`, sorted.
pub fn shift_breakpoints(d: &PointSet, j: &IndexSubset) -> Vec<Vec<Rational>> {
    j.members()
        .into_iter()
        .map(|k| {
            let mut b: Vec<Rational> = d
                .points()
                .iter()
                .map(|p| frac(&(Rational::one() - &p.coords()[k])))
                .collect();
            b.push(Rational::zero());
            b.sort();
            b.dedup();
            b
        })
        .collect()
}

/// `lambda_J[D + Z] = sum_X prod_{j in J} (1 - {x_j + z_j}) - N 2^{-|J|}`,
/// with one-sided shifts evaluated as limits.
pub fn lambda_shifted(d: &PointSet, z: &ShiftVector, j: &IndexSubset) -> Result<Rational> {
    d.check_dim(z.dim())?;
    Ok(d.points()
        .iter()
        .map(|p| {
            let shifted: Vec<SidedValue> =
                p.coords().iter().zip(z.coords()).map(|(x, zk)| zk.add(x)).collect();
            mean_lambda_sided(&shifted, j)
        })
        .sum())
}

/// One shift candidate for a single coordinate: the shift value and the
/// scaled limit coordinate of every point.
struct AxisOption<T> {
    shift: SidedValue,
    coords: Vec<T>,
}

fn axis_options<T: ExactInt>(d: &PointSet, k: usize, q: &BigInt) -> Vec<AxisOption<T>> {
    let breakpoints = shift_breakpoints(d, &IndexSubset::from_mask(d.dim(), 1 << k)).remove(0);
    let qt = T::from_big(q);
    let xs: Vec<T> = d.points().iter().map(|p| T::from_big(&scale(&p.coords()[k], q))).collect();
    let mut out = Vec::with_capacity(2 * breakpoints.len());
    for b in breakpoints {
        let bt = T::from_big(&scale(&b, q));
        for side in [Side::At, Side::LeftLimit] {
            let coords = xs
                .iter()
                .map(|x| {
                    let s = x.clone() + bt.clone();
                    if s.is_zero() || s == qt {
                        if side == Side::LeftLimit {
                            qt.clone()
                        } else {
                            T::zero()
                        }
                    } else if s > qt {
                        s - qt.clone()
                    } else {
                        s
                    }
                })
                .collect();
            out.push(AxisOption { shift: SidedValue::new(b.clone(), side), coords });
        }
    }
    out
}

fn decode(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for k in (0..radices.len()).rev() {
        digits[k] = idx % radices[k];
        idx /= radices[k];
    }
    digits
}

/// Exact `sup_Z lambda_J[D + Z]` (plain) or `sup_Z |lambda_J[D + Z]|` (abs).
pub fn lambda_star(
    d: &PointSet,
    j: &IndexSubset,
    mode: LambdaMode,
    budget: &EnumerationBudget,
) -> Result<ExtremalResult> {
    d.check_dim(j.dim())?;
    budget.check(SearchKind::LambdaStar, d.dim(), d.len())?;
    if j.is_empty() {
        return Ok(ExtremalResult {
            value: Rational::zero(),
            witness_anchor: None,
            witness_shift: Some(ShiftVector::zero(d.dim())),
            attained: true,
        });
    }
    let q = common_denominator(d.points().iter().flat_map(|p| p.coords()));
    let bits = bits_of_usize(d.len()) + j.len() as u64 * (bits_of(&q) + 1) + 2;
    let (value, digits) = if fits_i128(bits) {
        lambda_star_scaled::<i128>(d, j, mode, &q)
    } else {
        lambda_star_scaled::<BigInt>(d, j, mode, &q)
    };
    let members = j.members();
    let mut shift = vec![SidedValue::at(Rational::zero()); d.dim()];
    for (slot, &k) in members.iter().enumerate() {
        shift[k] = digits[slot].clone();
    }
    // Drop left-limit flags that do not change the value.
    for k in members {
        if shift[k].side == Side::LeftLimit {
            let mut trial = shift.clone();
            trial[k].side = Side::At;
            let v = lambda_shifted(d, &ShiftVector::new(trial.clone()), j)?;
            if mode.apply(v) == value {
                shift = trial;
            }
        }
    }
    let shift = ShiftVector::new(shift);
    Ok(ExtremalResult {
        attained: shift.is_exact(),
        value,
        witness_anchor: None,
        witness_shift: Some(shift),
    })
}

fn lambda_star_scaled<T: ExactInt>(
    d: &PointSet,
    j: &IndexSubset,
    mode: LambdaMode,
    q: &BigInt,
) -> (Rational, Vec<SidedValue>) {
    let qt = T::from_big(q);
    let members = j.members();
    let options: Vec<Vec<AxisOption<T>>> =
        members.iter().map(|&k| axis_options::<T>(d, k, q)).collect();
    // Weights 1 - {x + z}, scaled by Q.
    let weights: Vec<Vec<Vec<T>>> = options
        .iter()
        .map(|opts| {
            opts.iter()
                .map(|o| o.coords.iter().map(|c| qt.clone() - c.clone()).collect())
                .collect()
        })
        .collect();
    let radices: Vec<usize> = options.iter().map(Vec::len).collect();
    let total: usize = radices.iter().product();
    let scale_j = T::from(1i64 << members.len());
    let offset = T::from(d.len() as i64) * pow_t(&qt, members.len());

    let (best, order) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let digits = decode(idx, &radices);
            let mut sum = T::zero();
            for i in 0..d.len() {
                let mut prod = T::one();
                for (w, &o) in weights.iter().zip(&digits) {
                    prod = prod * w[o][i].clone();
                }
                sum = sum + prod;
            }
            let v = scale_j.clone() * sum - offset.clone();
            let v = match mode {
                LambdaMode::Abs => v.abs(),
                LambdaMode::Plain => v,
            };
            (v, idx)
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("at least one shift vertex");
    let denom = scale_j * pow_t(&qt, members.len());
    let digits = decode(order, &radices);
    let shift = digits.iter().enumerate().map(|(slot, &o)| options[slot][o].shift.clone()).collect();
    (Rational::new(best.to_big(), denom.to_big()), shift)
}

/// Exact `sup_Z sup_Y |L[D + Z, Y]|`.
pub fn linf_star_exact(d: &PointSet, budget: &EnumerationBudget) -> Result<ExtremalResult> {
    budget.check(SearchKind::LinfStar, d.dim(), d.len())?;
    let dim = d.dim();
    let q = common_denominator(d.points().iter().flat_map(|p| p.coords()));
    let options: Vec<Vec<AxisOption<BigInt>>> =
        (0..dim).map(|k| axis_options::<BigInt>(d, k, &q)).collect();
    let radices: Vec<usize> = options.iter().map(Vec::len).collect();
    let total: usize = radices.iter().product();

    let (best, idx) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let digits = decode(idx, &radices);
            let coords: Vec<Vec<Rational>> = (0..d.len())
                .map(|i| {
                    digits
                        .iter()
                        .enumerate()
                        .map(|(k, &o)| Rational::new(options[k][o].coords[i].clone(), q.clone()))
                        .collect()
                })
                .collect();
            (linf_of_coords(&coords, dim), idx)
        })
        .reduce_with(|a, b| {
            if b.0.value > a.0.value || (b.0.value == a.0.value && b.1 < a.1) {
                b
            } else {
                a
            }
        })
        .expect("at least one shift vertex");
    let digits = decode(idx, &radices);
    let mut shift: Vec<SidedValue> =
        digits.iter().enumerate().map(|(k, &o)| options[k][o].shift.clone()).collect();
    let mut grid = best;
    for k in 0..dim {
        if shift[k].side == Side::LeftLimit {
            let mut trial = shift.clone();
            trial[k].side = Side::At;
            let coords = d.limit_coords(&ShiftVector::new(trial.clone()))?;
            let g = linf_of_coords(&coords, dim);
            if g.value == grid.value {
                shift = trial;
                grid = g;
            }
        }
    }
    let shift = ShiftVector::new(shift);
    let anchor = super::simplify_anchor(&grid, |y| {
        crate::kernel::set_l_shifted(d, &shift, y).map(|v| v.abs())
    })?;
    Ok(ExtremalResult {
        attained: shift.is_exact() && anchor.is_exact(),
        value: grid.value,
        witness_anchor: Some(anchor),
        witness_shift: Some(shift),
    })
}

/// `|L|` maximum of the limit configuration `D + Z` (for re-evaluating witnesses).
pub fn linf_at_shift(d: &PointSet, z: &ShiftVector) -> Result<Rational> {
    let coords = d.limit_coords(z)?;
    Ok(linf_of_coords(&coords, d.dim()).value)
}

pub(crate) fn grid_best_for(d: &PointSet) -> GridBest {
    let coords: Vec<Vec<Rational>> = d.points().iter().map(|p| p.coords().to_vec()).collect();
    linf_of_coords(&coords, d.dim())
}
