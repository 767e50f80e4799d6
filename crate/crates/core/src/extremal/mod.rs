//! Exact suprema over anchors and shifts, and verification of the
//! inequalities relating them to `L_q` norms.

mod grid;
mod lev;
mod shift_search;
mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SearchKind};
use crate::kernel::{set_l, Anchor, PointSet, ShiftVector};
use crate::scalar::{serde_rational, Rational, Side, SidedValue};

pub use lev::{lev_constant, LevConstant};
pub use shift_search::{lambda_shifted, lambda_star, linf_at_shift, linf_star_exact, shift_breakpoints};
pub use verify::{
    verify, Bound, Direction, Enclosure, Inequality, Status, Verdict, VerifyOptions, Verifier,
};

/// Maximum number of points per dimension for each exact search. Index `k`
/// holds the limit for `d = k + 1`; dimensions past the end are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnumerationBudget {
    pub linf: Vec<usize>,
    pub linf_star: Vec<usize>,
    pub lambda_star: Vec<usize>,
    pub cells: Vec<usize>,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            linf: vec![64, 64, 12],
            linf_star: vec![16, 16, 5],
            lambda_star: vec![64, 64, 16, 8],
            cells: vec![256, 64, 12, 6],
        }
    }
}

impl EnumerationBudget {
    /// No limits at all; intended for tests and one-off runs.
    pub fn unlimited() -> Self {
        let big = vec![usize::MAX; crate::kernel::IndexSubset::MAX_DIM];
        EnumerationBudget { linf: big.clone(), linf_star: big.clone(), lambda_star: big.clone(), cells: big }
    }

    pub fn limit(&self, kind: SearchKind, dim: usize) -> usize {
        let table = match kind {
            SearchKind::Linf => &self.linf,
            SearchKind::LinfStar => &self.linf_star,
            SearchKind::LambdaStar => &self.lambda_star,
            SearchKind::Cells => &self.cells,
        };
        dim.checked_sub(1).and_then(|k| table.get(k)).copied().unwrap_or(0)
    }

    pub fn check(&self, kind: SearchKind, dim: usize, points: usize) -> Result<()> {
        let limit = self.limit(kind, dim);
        if points > limit {
            return Err(Error::BudgetExceeded { kind, dim, points, limit });
        }
        Ok(())
    }
}

/// Exact supremum with a maximizer. `attained` is false when the witness
/// carries a one-sided flag, i.e. the value is only approached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalResult {
    #[serde(with = "serde_rational")]
    pub value: Rational,
    pub witness_anchor: Option<Anchor>,
    pub witness_shift: Option<ShiftVector>,
    pub attained: bool,
}

/// Whether `lambda*` takes the supremum of `lambda` or of `|lambda|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMode {
    Abs,
    Plain,
}

impl LambdaMode {
    pub fn apply(self, v: Rational) -> Rational {
        match self {
            LambdaMode::Abs => num_traits::Signed::abs(&v),
            LambdaMode::Plain => v,
        }
    }
}

/// `Gamma_j = {x_ij} ∪ {1}` for each coordinate, sorted and deduplicated.
pub fn candidate_anchors(d: &PointSet) -> Vec<Vec<Rational>> {
    let coords: Vec<Vec<Rational>> = d.points().iter().map(|p| p.coords().to_vec()).collect();
    grid::breakpoint_grid(&coords, d.dim())
}

/// Exact `sup_Y |L[D, Y]|`.
pub fn linf_exact(d: &PointSet, budget: &EnumerationBudget) -> Result<ExtremalResult> {
    budget.check(SearchKind::Linf, d.dim(), d.len())?;
    let best = shift_search::grid_best_for(d);
    let anchor = simplify_anchor(&best, |y| Ok(num_traits::Signed::abs(&set_l(d, y))))?;
    Ok(ExtremalResult {
        attained: anchor.is_exact(),
        value: best.value,
        witness_anchor: Some(anchor),
        witness_shift: None,
    })
}

/// Turns a grid maximizer into an anchor with as few limit flags as
/// possible. Positive candidates are approached from above in every
/// coordinate; a flag is dropped when `eval` shows it does not matter.
pub(crate) fn simplify_anchor<F>(best: &grid::GridBest, eval: F) -> Result<Anchor>
where
    F: Fn(&Anchor) -> Result<Rational>,
{
    let side = if best.positive { Side::RightLimit } else { Side::At };
    let mut coords: Vec<SidedValue> =
        best.anchor.iter().map(|y| SidedValue::new(y.clone(), side)).collect();
    if best.positive {
        for k in 0..coords.len() {
            let mut trial = coords.clone();
            trial[k].side = Side::At;
            if eval(&Anchor::new(trial.clone())?)? == best.value {
                coords = trial;
            }
        }
    }
    Anchor::new(coords)
}
