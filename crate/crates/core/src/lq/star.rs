//! Shifted norms `L_q* = sup_Z L_q[D + Z]`.
//!
//! In one dimension `L[D + z, y] = g(y - z) - g(-z)` with `g` the periodic
//! extension of `L[D, .]`, so `L_q[D + z]^q = int |g - c|^q` with
//! `c = g(-z)`. For `q >= 1` this is convex in `c` and the supremum sits at
//! `c = sup g` or `c = inf g`, which gives the exact value.
//!
//! In higher dimensions every evaluated shift certifies a lower bound. Per
//! shift the bound comes from exact moments `M_k = int L^k`: directly for even
//! `q`, from `L_q >= L_{2k}` for larger `q`, and through Hölder's inequality
//! below 2 (`M_1 >= (M_2^3 / M_4)^{1/2}` and
//! `L_q >= (M_1^{2-q} / M_2^{1-q})^{1/q}` for `q < 1`).

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cells::{abs_power_integral_1d, CellDecomposition};
use super::{render_root, LqEstimate, LqKind};
use crate::error::{Result, SearchKind};
use crate::extremal::{shift_breakpoints, EnumerationBudget};
use crate::kernel::{IndexSubset, PointSet, ShiftVector};
use crate::scalar::{exponent_parts, frac, pow, render, root_ceil, root_floor, serde_rational, serde_rational_opt, Rational, SidedValue};

/// Search limits for [`lq_star_lower`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LqSearch {
    /// Maximum number of shifts evaluated.
    pub shift_evaluations: usize,
    pub budget: EnumerationBudget,
}

impl Default for LqSearch {
    fn default() -> Self {
        LqSearch { shift_evaluations: 2048, budget: EnumerationBudget::default() }
    }
}

/// Certified enclosure of `L_q*`. `upper` is present only when the value is
/// known exactly (one dimension, integer `q`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LqStarBound {
    pub estimate: LqEstimate,
    #[serde(with = "serde_rational")]
    pub lower: Rational,
    #[serde(with = "serde_rational_opt")]
    pub upper: Option<Rational>,
    pub witness_shift: ShiftVector,
    pub evaluations: usize,
}

/// Exact `(L_k*)^k` in one dimension for integer `k >= 1`, with a maximizing shift.
pub fn lq_star_power_1d(d: &PointSet, k: u32, budget: &EnumerationBudget) -> Result<(Rational, ShiftVector)> {
    d.check_dim(1)?;
    budget.check(SearchKind::Cells, 1, d.len())?;
    let coords: Vec<Rational> = d.points().iter().map(|p| p.coords()[0].clone()).collect();
    let n = Rational::from_integer(d.len().into());
    let mut grid = coords.clone();
    grid.push(Rational::from_integer(1.into()));
    grid.sort();
    grid.dedup();
    // sup g is approached from the right of a grid point, inf g is attained at one.
    let mut sup: Option<(Rational, Rational)> = None;
    let mut inf: Option<(Rational, Rational)> = None;
    for g in &grid {
        let right = coords.iter().filter(|c| *c <= g).count();
        let open = coords.iter().filter(|c| *c < g).count();
        let hi = Rational::from_integer(right.into()) - &n * g;
        let lo = Rational::from_integer(open.into()) - &n * g;
        if sup.as_ref().is_none_or(|(v, _)| hi > *v) {
            sup = Some((hi, g.clone()));
        }
        if inf.as_ref().is_none_or(|(v, _)| lo < *v) {
            inf = Some((lo, g.clone()));
        }
    }
    let (c_hi, g_hi) = sup.expect("grid contains 1");
    let (c_lo, g_lo) = inf.expect("grid contains 1");
    let p_hi = abs_power_integral_1d(&coords, &c_hi, k);
    let p_lo = abs_power_integral_1d(&coords, &c_lo, k);
    // c = g(-z): -z -> g_hi from above means z -> frac(-g_hi) from below.
    if p_hi >= p_lo {
        Ok((p_hi, ShiftVector::new(vec![SidedValue::left(frac(&-g_hi))])))
    } else {
        Ok((p_lo, ShiftVector::new(vec![SidedValue::at(frac(&-g_lo))])))
    }
}

/// Exact `L_1*` in one dimension.
pub fn l1_star_exact_1d(d: &PointSet, budget: &EnumerationBudget) -> Result<Rational> {
    Ok(lq_star_power_1d(d, 1, budget)?.0)
}

/// Certified lower bound on `L_q` of a configuration with coordinates in `[0, 1]`.
pub fn lq_lower_bound(coords: &[Vec<Rational>], dim: usize, q: &Rational) -> Result<Rational> {
    let (p, r) = exponent_parts(q)?;
    let cells = CellDecomposition::new(coords, dim);
    if *q >= Rational::from_integer(2.into()) {
        let e = 2 * (p / r / 2);
        return Ok(root_floor(&cells.power_integral(e), e));
    }
    let m = cells.power_integrals(&[1, 2, 4]);
    let m1 = if dim == 1 {
        let xs: Vec<Rational> = coords.iter().map(|c| c[0].clone()).collect();
        abs_power_integral_1d(&xs, &Rational::zero(), 1)
    } else if m[2].is_zero() {
        m[0].abs()
    } else {
        let holder = root_floor(&(pow(&m[1], 3) / &m[2]), 2);
        holder.max(m[0].abs())
    };
    if p >= r {
        return Ok(m1);
    }
    if m[1].is_zero() {
        return Ok(Rational::zero());
    }
    let num = pow(&m1, 2 * r - p);
    let den = pow(&m[1], r - p);
    Ok(root_floor(&(num / den), p))
}

/// Per-coordinate shift values by refinement level: breakpoint vertices from
/// both sides first, then dyadic subdivisions of each shift cell.
struct ShiftLevels {
    breakpoints: Vec<Vec<Rational>>,
    lists: Vec<Vec<SidedValue>>,
    level: u32,
}

impl ShiftLevels {
    fn new(d: &PointSet) -> Self {
        let breakpoints = shift_breakpoints(d, &IndexSubset::full(d.dim()));
        let lists = breakpoints
            .iter()
            .map(|b| b.iter().flat_map(|v| [SidedValue::at(v.clone()), SidedValue::left(v.clone())]).collect())
            .collect();
        ShiftLevels { breakpoints, lists, level: 0 }
    }

    fn refine(&mut self) {
        self.level += 1;
        let parts = Rational::from_integer((1u64 << self.level).into());
        let one = Rational::from_integer(1.into());
        for (b, list) in self.breakpoints.iter().zip(self.lists.iter_mut()) {
            for (k, lo) in b.iter().enumerate() {
                let hi = b.get(k + 1).unwrap_or(&one);
                let width = (hi - lo) / &parts;
                for m in (1..1u64 << self.level).step_by(2) {
                    list.push(SidedValue::at(lo + &width * Rational::from_integer(m.into())));
                }
            }
        }
    }
}

/// Shifts in evaluation order, at most `limit` of them. The zero shift comes first.
fn candidate_shifts(d: &PointSet, limit: usize) -> Vec<ShiftVector> {
    let mut levels = ShiftLevels::new(d);
    let mut out = Vec::new();
    let mut prev = vec![0usize; d.dim()];
    while out.len() < limit && levels.level < 24 {
        let radices: Vec<usize> = levels.lists.iter().map(Vec::len).collect();
        let total = radices.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r));
        let Some(total) = total else { break };
        for idx in 0..total {
            let mut rem = idx;
            let mut digits = vec![0usize; radices.len()];
            for k in (0..radices.len()).rev() {
                digits[k] = rem % radices[k];
                rem /= radices[k];
            }
            if digits.iter().zip(&prev).all(|(dg, p)| dg < p) {
                continue;
            }
            out.push(ShiftVector::new(
                digits.iter().enumerate().map(|(k, &o)| levels.lists[k][o].clone()).collect(),
            ));
            if out.len() == limit {
                return out;
            }
        }
        prev = radices;
        levels.refine();
    }
    out
}

/// Certified upper bound on `L_q*` from a node grid over the shift cells.
///
/// Inside one shift cell the limit coordinates move by exactly the shift, and
/// moving a point by `delta` changes its box indicator on a set of volume at
/// most `|delta|_1`. By Minkowski's inequality
/// `L_e[D + Z] <= L_e[D + Z_0] + N |Z - Z_0|_1^{1/e}` for `e >= 1`, so the
/// maximum over nodes plus that gap bounds `L_e*`, and `L_q* <= L_e*` for the
/// smallest even `e >= q`. Each cell is split into `2^s` pieces with `s` as
/// large as `nodes` allows; `None` if not even the vertices fit.
pub fn lq_star_upper(d: &PointSet, q: &Rational, nodes: usize, budget: &EnumerationBudget) -> Result<Option<Rational>> {
    let (p, r) = exponent_parts(q)?;
    budget.check(SearchKind::Cells, d.dim(), d.len())?;
    let e = {
        let c = p.div_ceil(r).max(1);
        c + c % 2
    };
    let breakpoints = shift_breakpoints(d, &IndexSubset::full(d.dim()));
    let one = Rational::from_integer(1.into());
    let count_at = |s: u32| -> Option<usize> {
        breakpoints.iter().try_fold(1usize, |acc, b| acc.checked_mul(b.len() * ((1usize << s) + 1)))
    };
    let Some(s) = (0..20).take_while(|&s| count_at(s).is_some_and(|c| c <= nodes)).last() else {
        return Ok(None);
    };
    let parts = Rational::from_integer((1u64 << s).into());
    let mut gap = Rational::zero();
    let axes: Vec<Vec<SidedValue>> = breakpoints
        .iter()
        .map(|b| {
            let mut widest = Rational::zero();
            let mut list = Vec::new();
            for (k, lo) in b.iter().enumerate() {
                let hi = b.get(k + 1).unwrap_or(&one);
                let w = (hi - lo) / &parts;
                widest = widest.max(w.clone());
                for m in 0..(1u64 << s) {
                    list.push(SidedValue::at(lo + &w * Rational::from_integer(m.into())));
                }
                list.push(SidedValue::left(frac(hi)));
            }
            gap += widest / Rational::from_integer(2.into());
            list
        })
        .collect();
    let radices: Vec<usize> = axes.iter().map(Vec::len).collect();
    let total: usize = radices.iter().product();
    let best = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut rem = idx;
            let mut shift = vec![SidedValue::at(Rational::zero()); radices.len()];
            for k in (0..radices.len()).rev() {
                shift[k] = axes[k][rem % radices[k]].clone();
                rem /= radices[k];
            }
            let coords = d.limit_coords(&ShiftVector::new(shift))?;
            Ok(CellDecomposition::new(&coords, d.dim()).power_integral(e))
        })
        .collect::<Result<Vec<Rational>>>()?
        .into_iter()
        .max()
        .expect("at least one node");
    let n = Rational::from_integer(d.len().into());
    Ok(Some(root_ceil(&best, e) + n * root_ceil(&gap, e)))
}

/// Certified lower bound on `L_q*` (exact in one dimension for integer `q`).
pub fn lq_star_lower(d: &PointSet, q: &Rational, search: &LqSearch) -> Result<LqStarBound> {
    let (p, r) = exponent_parts(q)?;
    search.budget.check(SearchKind::Cells, d.dim(), d.len())?;
    if d.dim() == 1 && r == 1 {
        let (value, shift) = lq_star_power_1d(d, p, &search.budget)?;
        let mut estimate = LqEstimate::exact(p, value.clone());
        estimate.q = q.clone();
        return Ok(LqStarBound {
            lower: root_floor(&value, p),
            upper: Some(root_ceil(&value, p)),
            estimate,
            witness_shift: shift,
            evaluations: 1,
        });
    }
    let shifts = candidate_shifts(d, search.shift_evaluations.max(1));
    let bounds: Vec<Rational> = shifts
        .par_iter()
        .map(|z| lq_lower_bound(&d.limit_coords(z)?, d.dim(), q))
        .collect::<Result<_>>()?;
    let (best, lower) = bounds
        .iter()
        .enumerate()
        .fold((0usize, &bounds[0]), |acc, (i, b)| if b > acc.1 { (i, b) } else { acc });
    let lower = lower.clone();
    let even = (r == 1 && p % 2 == 0).then(|| {
        CellDecomposition::new(&d.limit_coords(&shifts[best]).expect("checked above"), d.dim()).power_integral(p)
    });
    let value_float = match &even {
        Some(m) => render_root(m, p),
        None => render(&lower),
    };
    Ok(LqStarBound {
        estimate: LqEstimate {
            q: q.clone(),
            value_pow_q: even,
            value: Some(lower.clone()),
            value_float,
            kind: LqKind::LowerBound,
            stderr: None,
            samples: None,
            seed: None,
        },
        lower,
        upper: None,
        witness_shift: shifts[best].clone(),
        evaluations: shifts.len(),
    })
}
