//! Sound verification of inequalities between the discrepancy quantities.
//!
//! Every quantity is held as an enclosure `[lower, upper]`. An inequality
//! `lhs <= rhs` holds when `lhs.upper <= rhs.lower` and is violated when
//! `lhs.lower > rhs.upper`; anything else is inconclusive. Suprema over
//! anchors and shifts are exact, `L_q*` is enclosed by a shift search from
//! below and by `L_inf*` or a node-grid bound from above.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{lambda_star, lev_constant, linf_exact, linf_star_exact, EnumerationBudget, ExtremalResult, LambdaMode};
use crate::error::{Error, Result};
use crate::kernel::{IndexSubset, PointSet};
use crate::lq::{l1_star_exact_1d, lq_star_lower, lq_star_upper, LqSearch, LqStarBound};
use crate::scalar::{format_rational, pow, pow_bounds, rat, serde_rational, serde_rational_opt, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Holds,
    Violated,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "HOLDS",
            Status::Violated => "VIOLATED",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Exact,
    Lower,
    Upper,
}

/// A reported side of an inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bound {
    #[serde(with = "serde_rational")]
    pub value: Rational,
    pub direction: Direction,
}

/// Certified `[lower, upper]`; `upper` is `None` when unknown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enclosure {
    #[serde(with = "serde_rational")]
    pub lower: Rational,
    #[serde(with = "serde_rational_opt")]
    pub upper: Option<Rational>,
}

impl Enclosure {
    pub fn exact(v: Rational) -> Self {
        Enclosure { upper: Some(v.clone()), lower: v }
    }

    pub fn new(lower: Rational, upper: Option<Rational>) -> Self {
        Enclosure { lower, upper }
    }

    pub fn is_exact(&self) -> bool {
        self.upper.as_ref() == Some(&self.lower)
    }

    fn scale(&self, lo: &Rational, hi: &Rational) -> Enclosure {
        Enclosure { lower: &self.lower * lo, upper: self.upper.as_ref().map(|u| u * hi) }
    }

    fn cap(mut self, upper: &Rational) -> Enclosure {
        self.upper = Some(match self.upper {
            Some(u) if u < *upper => u,
            _ => upper.clone(),
        });
        self
    }

    fn lower_bound(&self) -> Bound {
        let direction = if self.is_exact() { Direction::Exact } else { Direction::Lower };
        Bound { value: self.lower.clone(), direction }
    }

    fn upper_bound(&self) -> Option<Bound> {
        let direction = if self.is_exact() { Direction::Exact } else { Direction::Upper };
        self.upper.clone().map(|value| Bound { value, direction })
    }
}

/// Named inequalities, each read as `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Inequality {
    /// `L_inf <= sum_J 2^{|J|} lambda*_J`.
    Lemma1,
    /// `2^{d-|J|} lambda*_J <= L_q*`, `q >= 1`.
    Lemma2(IndexSubset),
    /// `2^{|J|-d} lambda*_J <= L_q*`, `q >= 1`: what averaging over the
    /// complementary shift coordinates yields.
    MeanBound(IndexSubset),
    /// `L_inf <= L_inf*`.
    Lemma3Left,
    /// `L_inf* <= 3^d L_inf`.
    Lemma3Right,
    /// `3^{-d} L_q* <= L_inf`.
    CorollaryLower,
    /// `L_inf <= C_{d,q} L_q*`.
    CorollaryUpper,
    /// `L_1* <= (L_q*)^q (L_inf*)^{1-q}`, `0 < q <= 1`.
    Interpolation,
}

impl Inequality {
    pub fn id(&self) -> String {
        match self {
            Inequality::Lemma1 => "lemma1".into(),
            Inequality::Lemma2(j) => format!("lemma2[{}]", j.id()),
            Inequality::MeanBound(j) => format!("mean_bound[{}]", j.id()),
            Inequality::Lemma3Left => "lemma3_left".into(),
            Inequality::Lemma3Right => "lemma3_right".into(),
            Inequality::CorollaryLower => "corollary_lower".into(),
            Inequality::CorollaryUpper => "corollary_upper".into(),
            Inequality::Interpolation => "interpolation".into(),
        }
    }

    pub fn depends_on_q(&self) -> bool {
        !matches!(self, Inequality::Lemma1 | Inequality::Lemma3Left | Inequality::Lemma3Right)
    }

    /// Whether the inequality is stated for this `q`.
    pub fn applies(&self, q: &Rational) -> bool {
        match self {
            Inequality::Lemma2(_) | Inequality::MeanBound(_) => *q >= Rational::one(),
            Inequality::Interpolation => *q > Rational::zero() && *q <= Rational::one(),
            _ => *q > Rational::zero(),
        }
    }

    /// Parses a comma-separated list. `lemma2` and `mean_bound` without a
    /// subset expand to every `J`; `all` expands to every inequality.
    pub fn parse_list(s: &str, dim: usize) -> Result<Vec<Inequality>> {
        let mut out = Vec::new();
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            if name == "all" {
                out.extend(Inequality::all(dim));
                continue;
            }
            let (base, subset) = match name.split_once('[') {
                Some((b, rest)) => {
                    let inner = rest.strip_suffix(']').ok_or_else(|| bad(name))?;
                    (b, Some(IndexSubset::parse(dim, inner)?))
                }
                None => (name, None),
            };
            match (base, subset) {
                ("lemma1", None) => out.push(Inequality::Lemma1),
                ("lemma2", Some(j)) => out.push(Inequality::Lemma2(j)),
                ("lemma2", None) => out.extend(IndexSubset::all(dim).map(Inequality::Lemma2)),
                ("mean_bound", Some(j)) => out.push(Inequality::MeanBound(j)),
                ("mean_bound", None) => out.extend(IndexSubset::all(dim).map(Inequality::MeanBound)),
                ("lemma3_left", None) => out.push(Inequality::Lemma3Left),
                ("lemma3_right", None) => out.push(Inequality::Lemma3Right),
                ("lemma3", None) => out.extend([Inequality::Lemma3Left, Inequality::Lemma3Right]),
                ("corollary_lower", None) => out.push(Inequality::CorollaryLower),
                ("corollary_upper", None) => out.push(Inequality::CorollaryUpper),
                ("corollary", None) => out.extend([Inequality::CorollaryLower, Inequality::CorollaryUpper]),
                ("interpolation", None) => out.push(Inequality::Interpolation),
                _ => return Err(bad(name)),
            }
        }
        Ok(out)
    }

    pub fn all(dim: usize) -> Vec<Inequality> {
        let mut v = vec![Inequality::Lemma1];
        v.extend(IndexSubset::all(dim).map(Inequality::Lemma2));
        v.extend(IndexSubset::all(dim).map(Inequality::MeanBound));
        v.extend([
            Inequality::Lemma3Left,
            Inequality::Lemma3Right,
            Inequality::CorollaryLower,
            Inequality::CorollaryUpper,
            Inequality::Interpolation,
        ]);
        v
    }
}

fn bad(name: &str) -> Error {
    Error::InvalidParameter(format!("unknown inequality {name:?}"))
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl Serialize for Inequality {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub inequality: Inequality,
    #[serde(with = "serde_rational_opt")]
    pub q: Option<Rational>,
    pub status: Status,
    pub lhs: Option<Bound>,
    pub rhs: Option<Bound>,
    #[serde(with = "serde_rational_opt")]
    pub margin: Option<Rational>,
    pub lhs_enclosure: Option<Enclosure>,
    pub rhs_enclosure: Option<Enclosure>,
    pub witnesses: BTreeMap<String, serde_json::Value>,
    pub diagnostics: Vec<String>,
}

impl Verdict {
    /// Sound decision from two enclosures.
    pub fn decide(inequality: Inequality, q: Option<Rational>, lhs: Enclosure, rhs: Enclosure) -> Verdict {
        let holds = lhs.upper.as_ref().is_some_and(|u| *u <= rhs.lower);
        let violated = rhs.upper.as_ref().is_some_and(|u| lhs.lower > *u);
        let (status, l, r) = if holds {
            (Status::Holds, lhs.upper_bound(), Some(rhs.lower_bound()))
        } else if violated {
            (Status::Violated, Some(lhs.lower_bound()), rhs.upper_bound())
        } else {
            (Status::Inconclusive, lhs.upper_bound().or(Some(lhs.lower_bound())), Some(rhs.lower_bound()))
        };
        let margin = match (&l, &r) {
            (Some(l), Some(r)) => Some(&r.value - &l.value),
            _ => None,
        };
        Verdict {
            inequality,
            q,
            status,
            lhs: l,
            rhs: r,
            margin,
            lhs_enclosure: Some(lhs),
            rhs_enclosure: Some(rhs),
            witnesses: BTreeMap::new(),
            diagnostics: Vec::new(),
        }
    }

    fn failed(inequality: Inequality, q: Option<Rational>, message: String) -> Verdict {
        Verdict {
            inequality,
            q,
            status: Status::Inconclusive,
            lhs: None,
            rhs: None,
            margin: None,
            lhs_enclosure: None,
            rhs_enclosure: None,
            witnesses: BTreeMap::new(),
            diagnostics: vec![message],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Deserialize, Serialize)]
#[serde(default)]
pub struct VerifyOptions {
    pub budget: EnumerationBudget,
    /// Shifts evaluated for the `L_q*` lower bound in the first round.
    pub shift_evaluations: usize,
    /// Grid nodes for the `L_q*` upper bound in the first round.
    pub upper_nodes: usize,
    /// Extra rounds, each with four times the search size, before an
    /// `L_q*`-dependent verdict is left inconclusive.
    pub escalations: u32,
    pub lambda_mode: LambdaMode,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: EnumerationBudget::default(),
            shift_evaluations: 2048,
            upper_nodes: 4096,
            escalations: 2,
            lambda_mode: LambdaMode::Abs,
        }
    }
}

type Cached<T> = std::result::Result<T, String>;

/// Evaluates inequalities on one point set, caching shared quantities.
pub struct Verifier<'a> {
    d: &'a PointSet,
    opts: VerifyOptions,
    linf: Option<Cached<ExtremalResult>>,
    linf_star: Option<Cached<ExtremalResult>>,
    lambda: HashMap<u32, Cached<ExtremalResult>>,
    lq_lower: HashMap<(Rational, u32), Cached<LqStarBound>>,
    lq_upper: HashMap<(Rational, u32), Cached<Option<Rational>>>,
}

fn witness(v: &impl Serialize) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn power_of_two(e: i64) -> Rational {
    let two = rat(2, 1);
    if e >= 0 {
        pow(&two, e as u32)
    } else {
        Rational::one() / pow(&two, (-e) as u32)
    }
}

impl<'a> Verifier<'a> {
    pub fn new(d: &'a PointSet, opts: VerifyOptions) -> Self {
        Verifier {
            d,
            opts,
            linf: None,
            linf_star: None,
            lambda: HashMap::new(),
            lq_lower: HashMap::new(),
            lq_upper: HashMap::new(),
        }
    }

    pub fn options(&self) -> &VerifyOptions {
        &self.opts
    }

    pub fn linf(&mut self) -> Cached<ExtremalResult> {
        let (d, b) = (self.d, &self.opts.budget);
        self.linf.get_or_insert_with(|| linf_exact(d, b).map_err(|e| e.to_string())).clone()
    }

    pub fn linf_star(&mut self) -> Cached<ExtremalResult> {
        let (d, b) = (self.d, &self.opts.budget);
        self.linf_star.get_or_insert_with(|| linf_star_exact(d, b).map_err(|e| e.to_string())).clone()
    }

    pub fn lambda_star(&mut self, j: &IndexSubset) -> Cached<ExtremalResult> {
        let (d, b, mode) = (self.d, &self.opts.budget, self.opts.lambda_mode);
        self.lambda
            .entry(j.mask())
            .or_insert_with(|| lambda_star(d, j, mode, b).map_err(|e| e.to_string()))
            .clone()
    }

    pub fn lq_star(&mut self, q: &Rational, round: u32) -> Cached<LqStarBound> {
        let d = self.d;
        let search = LqSearch {
            shift_evaluations: self.opts.shift_evaluations.saturating_mul(1 << (2 * round)),
            budget: self.opts.budget.clone(),
        };
        self.lq_lower
            .entry((q.clone(), round))
            .or_insert_with(|| lq_star_lower(d, q, &search).map_err(|e| e.to_string()))
            .clone()
    }

    fn lq_star_upper(&mut self, q: &Rational, round: u32) -> Cached<Option<Rational>> {
        let (d, b) = (self.d, &self.opts.budget);
        let nodes = self.opts.upper_nodes.saturating_mul(1 << (2 * round));
        self.lq_upper
            .entry((q.clone(), round))
            .or_insert_with(|| lq_star_upper(d, q, nodes, b).map_err(|e| e.to_string()))
            .clone()
    }

    /// Enclosure of `L_q*` for this round, without the node-grid upper bound.
    fn lq_enclosure(&mut self, q: &Rational, round: u32, w: &mut BTreeMap<String, serde_json::Value>) -> Cached<Enclosure> {
        let lower = self.lq_star(q, round)?;
        let linf_star = self.linf_star()?;
        w.insert("lq_star_shift".into(), witness(&lower.witness_shift));
        w.insert("lq_star_evaluations".into(), lower.evaluations.into());
        w.insert("linf_star_shift".into(), witness(&linf_star.witness_shift));
        Ok(Enclosure::new(lower.lower.clone(), lower.upper.clone()).cap(&linf_star.value))
    }

    /// Verdict for one inequality. Errors only for an inequality that is not
    /// stated at this `q`; failures while computing give an inconclusive verdict.
    pub fn verify(&mut self, ineq: &Inequality, q: Option<&Rational>) -> Result<Verdict> {
        let q = if ineq.depends_on_q() {
            let q = q.ok_or_else(|| Error::InvalidParameter(format!("{ineq} needs q")))?;
            if !ineq.applies(q) {
                return Err(Error::InvalidParameter(format!(
                    "{ineq} is not stated for q = {}",
                    format_rational(q)
                )));
            }
            Some(q.clone())
        } else {
            None
        };
        if *ineq == Inequality::Interpolation && q.as_ref().is_some_and(|q| q.is_one()) {
            return Ok(self.interpolation_at_one());
        }
        let mut last = None;
        for round in 0..=self.opts.escalations {
            let mut w = BTreeMap::new();
            let mut v = match self.sides(ineq, q.as_ref(), round, &mut w) {
                Ok((lhs, rhs)) => Verdict::decide(ineq.clone(), q.clone(), lhs, rhs),
                Err(msg) => Verdict::failed(ineq.clone(), q.clone(), msg),
            };
            v.witnesses = w;
            if round > 0 {
                v.diagnostics.push(format!("escalated {round} time(s)"));
            }
            let retry = v.status == Status::Inconclusive && ineq.depends_on_q() && v.lhs_enclosure.is_some();
            last = Some(v);
            if !retry {
                break;
            }
        }
        Ok(last.expect("at least one round"))
    }

    /// At `q = 1` both sides are `L_1*`, so the inequality holds with margin
    /// zero whatever the enclosure of `L_1*` is.
    fn interpolation_at_one(&mut self) -> Verdict {
        let one = Rational::one();
        let mut w = BTreeMap::new();
        let enc = if self.d.dim() == 1 {
            l1_star_exact_1d(self.d, &self.opts.budget).map(Enclosure::exact).map_err(|e| e.to_string())
        } else {
            self.lq_enclosure(&one, 0, &mut w)
        };
        let mut v = match enc {
            Ok(e) => {
                let mut v = Verdict::decide(Inequality::Interpolation, Some(one), e.clone(), e.clone());
                v.status = Status::Holds;
                v.lhs = Some(e.lower_bound());
                v.rhs = Some(e.lower_bound());
                v.margin = Some(Rational::zero());
                v.diagnostics.push("q = 1: both sides are L_1*".into());
                v
            }
            Err(msg) => Verdict::failed(Inequality::Interpolation, Some(one), msg),
        };
        v.witnesses = w;
        v
    }

    /// Tightens the upper end of an `L_q*` enclosure with the node-grid
    /// bound, but only when that could decide a violation against `lhs_lower`.
    fn refine_upper(&mut self, enc: Enclosure, q: &Rational, round: u32, lhs_lower: &Rational) -> Cached<Enclosure> {
        if enc.lower >= *lhs_lower || enc.upper.as_ref().is_some_and(|u| u < lhs_lower) || enc.is_exact() {
            return Ok(enc);
        }
        match self.lq_star_upper(q, round)? {
            Some(u) => Ok(enc.cap(&u)),
            None => Ok(enc),
        }
    }

    fn sides(
        &mut self,
        ineq: &Inequality,
        q: Option<&Rational>,
        round: u32,
        w: &mut BTreeMap<String, serde_json::Value>,
    ) -> Cached<(Enclosure, Enclosure)> {
        let dim = self.d.dim();
        match ineq {
            Inequality::Lemma1 => {
                let linf = self.linf()?;
                w.insert("linf_anchor".into(), witness(&linf.witness_anchor));
                let mut sum = Rational::zero();
                for j in IndexSubset::all(dim) {
                    let l = self.lambda_star(&j)?;
                    w.insert(format!("lambda_star_shift[{}]", j.id()), witness(&l.witness_shift));
                    sum += power_of_two(j.len() as i64) * l.value;
                }
                Ok((Enclosure::exact(linf.value), Enclosure::exact(sum)))
            }
            Inequality::Lemma2(j) | Inequality::MeanBound(j) => {
                let q = q.expect("checked by caller");
                let l = self.lambda_star(j)?;
                w.insert(format!("lambda_star_shift[{}]", j.id()), witness(&l.witness_shift));
                let e = dim as i64 - j.len() as i64;
                let factor = power_of_two(if matches!(ineq, Inequality::Lemma2(_)) { e } else { -e });
                let lhs = factor * l.value;
                let rhs = self.lq_enclosure(q, round, w)?;
                let rhs = self.refine_upper(rhs, q, round, &lhs)?;
                Ok((Enclosure::exact(lhs), rhs))
            }
            Inequality::Lemma3Left => {
                let linf = self.linf()?;
                let star = self.linf_star()?;
                w.insert("linf_anchor".into(), witness(&linf.witness_anchor));
                w.insert("linf_star_shift".into(), witness(&star.witness_shift));
                Ok((Enclosure::exact(linf.value), Enclosure::exact(star.value)))
            }
            Inequality::Lemma3Right => {
                let linf = self.linf()?;
                let star = self.linf_star()?;
                w.insert("linf_anchor".into(), witness(&linf.witness_anchor));
                w.insert("linf_star_shift".into(), witness(&star.witness_shift));
                let three = pow(&rat(3, 1), dim as u32);
                Ok((Enclosure::exact(star.value), Enclosure::exact(three * linf.value)))
            }
            Inequality::CorollaryLower => {
                let q = q.expect("checked by caller");
                let linf = self.linf()?;
                w.insert("linf_anchor".into(), witness(&linf.witness_anchor));
                let inv = Rational::one() / pow(&rat(3, 1), dim as u32);
                let lq = self.lq_enclosure(q, round, w)?;
                Ok((lq.scale(&inv, &inv), Enclosure::exact(linf.value)))
            }
            Inequality::CorollaryUpper => {
                let q = q.expect("checked by caller");
                let linf = self.linf()?;
                w.insert("linf_anchor".into(), witness(&linf.witness_anchor));
                let c = lev_constant(dim as u32, q).map_err(|e| e.to_string())?;
                let lq = self.lq_enclosure(q, round, w)?;
                let rhs = lq.scale(&c.lower, &c.upper);
                let lhs = linf.value;
                let rhs = if rhs.lower < lhs && rhs.upper.as_ref().is_none_or(|u| *u >= lhs) {
                    let lq = self.lq_enclosure(q, round, w)?;
                    let target = &lhs / &c.upper;
                    self.refine_upper(lq, q, round, &target)?.scale(&c.lower, &c.upper)
                } else {
                    rhs
                };
                Ok((Enclosure::exact(lhs), rhs))
            }
            Inequality::Interpolation => {
                let q = q.expect("checked by caller");
                let one = Rational::one();
                let lhs = if dim == 1 {
                    Enclosure::exact(l1_star_exact_1d(self.d, &self.opts.budget).map_err(|e| e.to_string())?)
                } else {
                    let l1 = self.lq_enclosure(&one, round, w)?;
                    self.refine_upper(l1, &one, round, &Rational::zero())?
                };
                let lq = self.lq_enclosure(q, round, w)?;
                let star = self.linf_star()?.value;
                let rest = &one - q;
                let (s_lo, s_hi) = pow_bounds(&star, &rest).map_err(|e| e.to_string())?;
                let (q_lo, _) = pow_bounds(&lq.lower, q).map_err(|e| e.to_string())?;
                let upper = match &lq.upper {
                    Some(u) => Some(pow_bounds(u, q).map_err(|e| e.to_string())?.1 * &s_hi),
                    None => None,
                };
                Ok((lhs, Enclosure::new(q_lo * s_lo, upper)))
            }
        }
    }
}

/// Verdicts for a comma-separated inequality list at one `q`; inequalities
/// not stated at `q` are skipped.
pub fn verify(names: &str, d: &PointSet, q: &Rational, opts: &VerifyOptions) -> Result<Vec<Verdict>> {
    let list = Inequality::parse_list(names, d.dim())?;
    let mut verifier = Verifier::new(d, opts.clone());
    let mut out = Vec::new();
    for ineq in list.iter().filter(|i| !i.depends_on_q() || i.applies(q)) {
        out.push(verifier.verify(ineq, Some(q))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::TorusPoint;
    use crate::scalar::int;

    fn half() -> PointSet {
        PointSet::new(1, vec![TorusPoint::new([rat(1, 2)])], "").unwrap()
    }

    fn run(name: &str, d: &PointSet, q: Rational) -> Verdict {
        verify(name, d, &q, &VerifyOptions::default()).unwrap().remove(0)
    }

    #[test]
    fn lemma1_one_point() {
        let v = run("lemma1", &half(), int(1));
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.lhs.as_ref().unwrap().value, rat(1, 2));
        assert_eq!(v.rhs.as_ref().unwrap().value, int(1));
        assert_eq!(v.margin, Some(rat(1, 2)));
    }

    #[test]
    fn lemma3_left_holds() {
        let d = PointSet::from_rows(2, vec![vec![rat(1, 5), rat(2, 5)], vec![rat(3, 5), rat(1, 5)]], "").unwrap();
        let v = run("lemma3_left", &d, int(1));
        assert_eq!(v.status, Status::Holds);
        assert!(v.margin.unwrap() >= Rational::zero());
    }

    #[test]
    fn corollary_lower_one_point() {
        let v = run("corollary_lower", &half(), int(2));
        assert_eq!(v.status, Status::Holds);
    }

    #[test]
    fn interpolation_one_point() {
        let v = run("interpolation", &half(), rat(1, 2));
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.lhs.unwrap(), Bound { value: rat(1, 2), direction: Direction::Exact });
        let v = run("interpolation", &half(), int(1));
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.margin, Some(Rational::zero()));
    }

    #[test]
    fn decide_rules() {
        let ineq = Inequality::Lemma1;
        let v = Verdict::decide(ineq.clone(), None, Enclosure::exact(int(1)), Enclosure::new(int(1), None));
        assert_eq!(v.status, Status::Holds);
        let v = Verdict::decide(ineq.clone(), None, Enclosure::new(int(2), None), Enclosure::new(int(0), Some(int(1))));
        assert_eq!(v.status, Status::Violated);
        assert!(v.margin.unwrap() < Rational::zero());
        let v = Verdict::decide(ineq, None, Enclosure::new(int(0), Some(int(2))), Enclosure::new(int(1), Some(int(3))));
        assert_eq!(v.status, Status::Inconclusive);
    }

    #[test]
    fn parse_names() {
        let all = Inequality::parse_list("lemma2", 2).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(all[3].id(), "lemma2[1+2]");
        let v = Inequality::parse_list("lemma2[], mean_bound[2],corollary", 2).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0].id(), "lemma2[]");
        assert!(Inequality::parse_list("lemma9", 2).is_err());
    }

    #[test]
    fn lemma2_single_point_plane() {
        // 2 lambda*_{1} = 1 exceeds L_1* of a single point.
        let d = PointSet::from_rows(2, vec![vec![rat(1, 3), rat(1, 2)]], "").unwrap();
        let v = run("lemma2[1]", &d, int(1));
        assert_eq!(v.status, Status::Violated);
        let v = run("mean_bound[1]", &d, int(1));
        assert_eq!(v.status, Status::Holds);
    }

    #[test]
    fn inapplicable_q_rejected() {
        let d = half();
        let mut ver = Verifier::new(&d, VerifyOptions::default());
        assert!(ver.verify(&Inequality::Interpolation, Some(&int(2))).is_err());
        assert!(ver.verify(&Inequality::Lemma2(IndexSubset::full(1)), Some(&rat(1, 2))).is_err());
        assert!(verify("interpolation", &half(), &int(2), &VerifyOptions::default()).unwrap().is_empty());
    }
}
