//! Indicator, discrepancy function, sub-torus means and alternants.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::types::{Anchor, IndexSubset, PointSet, TorusPoint};
use crate::scalar::{frac, frac_sided, int, rat, Rational, Side, SidedValue};

/// `[c < y]` for a coordinate `c` already reduced to `[0, 1]`, with the side
/// of `y` resolving ties: a right limit at `y = c` includes `c`.
pub fn chi_reduced(c: &Rational, y: &SidedValue) -> bool {
    match y.side {
        Side::RightLimit => c <= &y.value,
        Side::At | Side::LeftLimit => c < &y.value,
    }
}

/// Box indicator `chi(x, y) = [{x} < y]`.
pub fn chi(x: &Rational, y: &SidedValue) -> Rational {
    if chi_reduced(&frac(x), y) {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// `v_J(Y) = prod_{j in J} y_j`; 1 for the empty set.
pub fn volume(y: &Anchor, j: &IndexSubset) -> Rational {
    j.members().iter().map(|&k| y.coords()[k].value.clone()).product()
}

/// Sawtooth `omega(x) = 1/2 - {x}`.
pub fn omega(x: &SidedValue) -> Rational {
    rat(1, 2) - frac_sided(x)
}

/// `omega_J(X) = prod_{j in J} omega(x_j)`, with `omega_{{}} = 0`.
pub fn omega_product(x: &[SidedValue], j: &IndexSubset) -> Rational {
    if j.is_empty() {
        return Rational::zero();
    }
    j.members().iter().map(|&k| omega(&x[k])).product()
}

/// Partial discrepancy `L_J(X, Y) = chi_J(X, Y) - v_J(Y)`; zero for `J` empty.
pub fn local_l(x: &TorusPoint, y: &Anchor, j: &IndexSubset) -> Rational {
    if j.is_empty() {
        return Rational::zero();
    }
    let inside = j.members().iter().all(|&k| chi_reduced(&x.coords()[k], &y.coords()[k]));
    let chi = if inside { Rational::one() } else { Rational::zero() };
    chi - volume(y, j)
}

/// Sub-torus mean `lambda_J(X) = prod_{j in J} (1 - {x_j}) - 2^{-|J|}`, at
/// possibly one-sided coordinates.
pub fn mean_lambda_sided(x: &[SidedValue], j: &IndexSubset) -> Rational {
    if j.is_empty() {
        return Rational::zero();
    }
    let prod: Rational = j.members().iter().map(|&k| Rational::one() - frac_sided(&x[k])).product();
    prod - Rational::new(BigInt::one(), BigInt::one() << j.len())
}

pub fn mean_lambda(x: &TorusPoint, j: &IndexSubset) -> Rational {
    mean_lambda_sided(&x.to_sided(), j)
}

/// `lambda_J[D] = sum_X lambda_J(X)`.
pub fn set_mean_lambda(d: &PointSet, j: &IndexSubset) -> Rational {
    d.points().iter().map(|x| mean_lambda(x, j)).sum()
}

/// Alternant of `f` at `X` with respect to `Y_J`: the signed sum of `f` over
/// the `2^|J|` points `X_J - Theta_J . Y_J`, differences taken mod 1.
pub fn alternant<F>(f: F, x: &TorusPoint, y: &Anchor, j: &IndexSubset) -> Rational
where
    F: Fn(&[SidedValue]) -> Rational,
{
    let base = x.to_sided();
    let mut total = Rational::zero();
    for theta in j.subsets() {
        let arg: Vec<SidedValue> = base
            .iter()
            .enumerate()
            .map(|(k, xk)| {
                if theta.contains(k) {
                    let diff = y.coords()[k].subtract_from(&xk.value);
                    SidedValue::new(frac(&diff.value), diff.side)
                } else {
                    xk.clone()
                }
            })
            .collect();
        let term = f(&arg);
        if theta.len() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `lambda_J^{(alt)}(X | Y_J)` through the generic alternant.
pub fn lambda_alternant(x: &TorusPoint, y: &Anchor, j: &IndexSubset) -> Rational {
    alternant(|c| mean_lambda_sided(c, j), x, y, j)
}

/// `omega_J^{(alt)}(X | Y_J)` through the product rule: one factor
/// `omega(x_j) - omega(x_j - y_j)` per `j in J`, zero for `J` empty.
pub fn omega_alternant(x: &TorusPoint, y: &Anchor, j: &IndexSubset) -> Rational {
    if j.is_empty() {
        return Rational::zero();
    }
    j.members()
        .iter()
        .map(|&k| {
            let xk = SidedValue::at(x.coords()[k].clone());
            omega(&xk) - omega(&y.coords()[k].subtract_from(&xk.value))
        })
        .product()
}

/// Whether `chi(x, y) = y - {x} + {x - y} = y + omega(x) - omega(x - y)` holds exactly.
pub fn chi_decomposition_check(x: &Rational, y: &Rational) -> bool {
    let ys = SidedValue::at(y.clone());
    let lhs = chi(x, &ys);
    let frac_form = y - frac(x) + frac(&(x - y));
    let omega_form = y + omega(&SidedValue::at(x.clone())) - omega(&SidedValue::at(x - y));
    lhs == frac_form && lhs == omega_form
}

/// Whether `lambda_J(X) = sum_{I subset J} 2^{-|J \ I|} omega_I(X)` holds exactly.
pub fn lambda_expansion_check(x: &TorusPoint, j: &IndexSubset) -> bool {
    let sided = x.to_sided();
    let rhs: Rational = j
        .subsets()
        .map(|i| {
            let weight = Rational::new(BigInt::one(), BigInt::one() << j.difference(&i).len());
            weight * omega_product(&sided, &i)
        })
        .sum();
    mean_lambda(x, j) == rhs
}

/// Right-hand side of the mean-value identity for one point:
/// `sum_J v_{J'}(Y) lambda_J^{(alt)}(X | Y_J)`.
pub fn main_identity_rhs(x: &TorusPoint, y: &Anchor) -> Rational {
    IndexSubset::all(x.dim())
        .map(|j| volume(y, &j.complement()) * lambda_alternant(x, y, &j))
        .sum()
}

/// Number of points of `D` strictly inside the anchored box `prod [0, y_j)`.
pub fn box_count(d: &PointSet, y: &Anchor) -> usize {
    d.points()
        .iter()
        .filter(|p| p.coords().iter().zip(y.coords()).all(|(c, yk)| chi_reduced(c, yk)))
        .count()
}

/// Local discrepancy `L[D, Y] = sum_X L(X, Y) = A(Y) - N v(Y)`.
pub fn set_l(d: &PointSet, y: &Anchor) -> Rational {
    let full = IndexSubset::full(d.dim());
    int(box_count(d, y) as i64) - int(d.len() as i64) * volume(y, &full)
}

/// Set-level identity right-hand side
/// `sum_J v_{J'}(Y) sum_X lambda_J^{(alt)}(X | Y_J)`.
pub fn set_identity_rhs(d: &PointSet, y: &Anchor) -> Rational {
    IndexSubset::all(d.dim())
        .map(|j| {
            let alt: Rational = d.points().iter().map(|x| lambda_alternant(x, y, &j)).sum();
            volume(y, &j.complement()) * alt
        })
        .sum()
}

/// `L[D + Z, Y]` for a possibly one-sided shift `Z`, evaluated on the limit
/// configuration of [`PointSet::limit_coords`]: a coordinate that reached an
/// integer from below sits at 1 and is only covered by the anchor `1+`.
pub fn set_l_shifted(
    d: &PointSet,
    z: &super::types::ShiftVector,
    y: &Anchor,
) -> crate::error::Result<Rational> {
    d.check_dim(y.dim())?;
    let coords = d.limit_coords(z)?;
    let count = coords
        .iter()
        .filter(|c| c.iter().zip(y.coords()).all(|(ck, yk)| chi_reduced(ck, yk)))
        .count();
    let full = IndexSubset::full(d.dim());
    Ok(int(count as i64) - int(d.len() as i64) * volume(y, &full))
}
