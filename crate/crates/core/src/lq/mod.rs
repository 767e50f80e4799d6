//! `L_q` norms of the local discrepancy: exact even moments, a closed form
//! for `L_2`, Monte Carlo for general `q`, and certified lower bounds for the
//! shifted norm `L_q*`.

mod cells;
mod monte_carlo;
mod star;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result, SearchKind};
use crate::extremal::EnumerationBudget;
use crate::kernel::{PointSet, ShiftVector};
use crate::scalar::{pow, rat, serde_rational, serde_rational_opt, Rational};

pub use cells::CellDecomposition;
pub use monte_carlo::lq_numeric;
pub use star::{l1_star_exact_1d, lq_lower_bound, lq_star_lower, lq_star_power_1d, lq_star_upper, LqSearch, LqStarBound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LqKind {
    Exact,
    LowerBound,
    MonteCarlo,
}

/// An `L_q` value. `value_pow_q` is `L_q^q` when that is known exactly;
/// `value` is a rational certified lower bound on `L_q` itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LqEstimate {
    #[serde(with = "serde_rational")]
    pub q: Rational,
    #[serde(with = "serde_rational_opt")]
    pub value_pow_q: Option<Rational>,
    #[serde(with = "serde_rational_opt")]
    pub value: Option<Rational>,
    pub value_float: f64,
    pub kind: LqKind,
    pub stderr: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

impl LqEstimate {
    pub fn exact(q: u32, pow_q: Rational) -> Self {
        LqEstimate {
            q: Rational::from_integer(q.into()),
            value_float: render_root(&pow_q, q),
            value: Some(crate::scalar::root_floor(&pow_q, q)),
            value_pow_q: Some(pow_q),
            kind: LqKind::Exact,
            stderr: None,
            samples: None,
            seed: None,
        }
    }
}

pub(crate) fn render_root(x: &Rational, k: u32) -> f64 {
    crate::scalar::render_f64(crate::scalar::to_f64(x).powf(1.0 / k as f64))
}

pub(crate) fn even_exponent(q: u32) -> Result<u32> {
    if q == 0 || !q.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("exact L_q needs an even positive q, got {q}")));
    }
    Ok(q)
}

fn cells_for(d: &PointSet, coords: &[Vec<Rational>], budget: &EnumerationBudget) -> Result<CellDecomposition> {
    budget.check(SearchKind::Cells, d.dim(), d.len())?;
    Ok(CellDecomposition::new(coords, d.dim()))
}

fn plain_coords(d: &PointSet) -> Vec<Vec<Rational>> {
    d.points().iter().map(|p| p.coords().to_vec()).collect()
}

/// `L_q^q = int |L[D, Y]|^q dY` for even `q`.
pub fn lq_exact_even(d: &PointSet, q: u32, budget: &EnumerationBudget) -> Result<Rational> {
    let q = even_exponent(q)?;
    Ok(cells_for(d, &plain_coords(d), budget)?.power_integral(q))
}

/// `int L[D, Y] dY`.
pub fn mean_integral(d: &PointSet, budget: &EnumerationBudget) -> Result<Rational> {
    Ok(cells_for(d, &plain_coords(d), budget)?.power_integral(1))
}

/// `L_q^q` of `D + Z` for even `q`; one-sided shifts use the limit configuration.
pub fn lq_shifted_exact(d: &PointSet, z: &ShiftVector, q: u32, budget: &EnumerationBudget) -> Result<Rational> {
    let q = even_exponent(q)?;
    Ok(cells_for(d, &d.limit_coords(z)?, budget)?.power_integral(q))
}

/// Closed form
/// `L_2^2 = sum_{i,i'} prod_j (1 - max(x_ij, x_i'j)) - 2N sum_i prod_j (1 - x_ij^2)/2 + N^2 3^{-d}`.
pub fn l2_warnock(d: &PointSet) -> Rational {
    let one = Rational::one();
    let pts = d.points();
    let mut pair = Rational::zero();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i..] {
            let prod: Rational = a
                .coords()
                .iter()
                .zip(b.coords())
                .map(|(x, y)| &one - x.max(y))
                .product();
            pair += if std::ptr::eq(a, b) { prod } else { prod * Rational::from_integer(2.into()) };
        }
    }
    let single: Rational = pts
        .iter()
        .map(|p| p.coords().iter().map(|x| (&one - x * x) / Rational::from_integer(2.into())).product::<Rational>())
        .sum();
    let n = Rational::from_integer(BigInt::from(d.len()));
    pair - Rational::from_integer(2.into()) * &n * single + &n * &n * pow(&rat(1, 3), d.dim() as u32)
}

/// Float rendering of `L_q` from a rational `L_q^q`.
pub fn lq_float(pow_q: &Rational, q: u32) -> f64 {
    render_root(pow_q, q)
}
