//! Run configuration, command drivers and report emission for the
//! `discrepancy` binary.
//!
//! Every command works on a list of items (point sets) loaded from an input
//! file or generator specs. Items run on a dedicated thread pool of
//! `jobs` threads and are reassembled by index, so output does not depend on
//! scheduling.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::extremal::{
    lambda_star, lev_constant, linf_exact, linf_star_exact, Inequality, LevConstant, Status, Verdict, Verifier,
    VerifyOptions,
};
use crate::gen::{default_corpus_specs, GeneratorSpec};
use crate::kernel::{set_identity_rhs, set_l, set_mean_lambda, Anchor, IndexSubset, PointSet};
use crate::lq::{l2_warnock, lq_exact_even, lq_numeric, lq_star_lower, lq_star_upper, LqEstimate, LqSearch};
use crate::scalar::{exponent_parts, format_rational, int, parse_rational, rat, render, Rational, SidedValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Gen,
    Eval,
    Identity,
    Extremal,
    Lq,
    Verify,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

/// Everything a run depends on. A saved config reproduces the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Point-set JSON file: one set or an array of sets.
    pub input: Option<PathBuf>,
    /// Generator specs; integer parameters may be ranges `lo..hi`.
    pub generator: Vec<String>,
    /// Exponents as `p/q` strings; empty means the command default.
    pub q: Vec<String>,
    pub inequalities: String,
    pub verify: VerifyOptions,
    pub seed: u64,
    /// Monte Carlo samples for non-even `q`.
    pub samples: u64,
    /// Anchors per set for `identity`, including `0` and `(1, ..., 1)`.
    pub anchors: usize,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    /// Where `sweep` writes its JSON report when the main output is CSV.
    pub report: Option<PathBuf>,
    pub format: Option<Format>,
    pub timing: bool,
    /// Perturbs one identity evaluation per set; a harness self-test.
    pub inject_fault: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: None,
            generator: Vec::new(),
            q: Vec::new(),
            inequalities: "all".into(),
            verify: VerifyOptions::default(),
            seed: 0,
            samples: 100_000,
            anchors: 100,
            jobs: 1,
            out: None,
            report: None,
            format: None,
            timing: false,
            inject_fault: false,
        }
    }
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Exponents to use, falling back to the command default.
    pub fn q_values(&self, command: Command) -> Result<Vec<Rational>> {
        if self.q.is_empty() {
            let default: &[i64] = if command == Command::Verify { &[1, 2, 4] } else { &[2] };
            return Ok(default.iter().map(|&k| int(k)).collect());
        }
        self.q
            .iter()
            .flat_map(|s| s.split(','))
            .map(|s| {
                let q = parse_rational(s.trim())?;
                exponent_parts(&q)?;
                Ok(q)
            })
            .collect()
    }

    pub fn format_for(&self, command: Command) -> Format {
        self.format.unwrap_or(if command == Command::Sweep { Format::Csv } else { Format::Json })
    }
}

/// A point set with where it came from.
#[derive(Debug, Clone)]
pub struct Item {
    pub source: String,
    pub family: String,
    pub set: PointSet,
}

/// Loads the items of a run. Without input or generators, `verify` and
/// `sweep` fall back to the built-in corpus.
pub fn load_items(cfg: &RunConfig, command: Command) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    if let Some(path) = &cfg.input {
        let text = std::fs::read_to_string(path)?;
        let value: Value = serde_json::from_str(&text)?;
        let sets = match value {
            Value::Array(list) => list,
            other => vec![other],
        };
        for (k, v) in sets.into_iter().enumerate() {
            let set = PointSet::from_json(&v.to_string())?;
            let source = if set.label().is_empty() { format!("{}#{k}", path.display()) } else { set.label().to_string() };
            items.push(Item { source, family: "explicit".into(), set });
        }
    }
    let specs: Vec<String> = if cfg.generator.is_empty() && cfg.input.is_none() {
        match command {
            Command::Verify | Command::Sweep => default_corpus_specs(),
            _ => return Err(Error::InvalidParameter("no input or generator given".into())),
        }
    } else {
        cfg.generator.clone()
    };
    for s in &specs {
        for g in GeneratorSpec::expand(s)? {
            let set = g.generate()?;
            items.push(Item { source: g.to_string(), family: g.family().into(), set });
        }
    }
    Ok(items)
}

/// Exact value with its float rendering.
pub fn exact(x: &Rational) -> Value {
    json!({ "exact": format_rational(x), "float": render(x) })
}

#[derive(Debug, Clone, Serialize)]
pub struct ItemReport {
    pub index: usize,
    pub source: String,
    pub family: String,
    pub n: usize,
    pub d: usize,
    pub results: Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    #[serde(skip)]
    mismatches: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub items: usize,
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    pub mismatches: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantRow {
    pub d: usize,
    #[serde(with = "crate::scalar::serde_rational")]
    pub q: Rational,
    pub constant: LevConstant,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Command,
    pub config: RunConfig,
    /// `C_{d,q}` for every `(d, q)` of the run.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<ConstantRow>,
    pub items: Vec<ItemReport>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl Report {
    /// 1 if any verdict is VIOLATED or an identity check mismatched, else 0.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.violated > 0 || self.summary.mismatches > 0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Result of a command: the report plus the CSV body for `sweep`.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
}

fn elapsed_ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

/// Runs an analysis command (everything but `gen`).
pub fn run(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    if command == Command::Gen {
        return Err(Error::InvalidParameter("gen produces point sets, not a report".into()));
    }
    if cfg.format_for(command) == Format::Csv && command != Command::Sweep {
        return Err(Error::InvalidParameter("csv output is only available for sweep".into()));
    }
    let start = Instant::now();
    let items = load_items(cfg, command)?;
    let qs = cfg.q_values(command)?;
    if matches!(command, Command::Verify | Command::Sweep) {
        // Validate against the largest dimension so typos fail before any work.
        let dim = items.iter().map(|i| i.set.dim()).max().unwrap_or(1);
        Inequality::parse_list(&cfg.inequalities, dim)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rows: Vec<(ItemReport, Vec<SweepRow>)> = pool.install(|| {
        items.par_iter().enumerate().map(|(index, item)| run_item(command, cfg, &qs, index, item)).collect()
    });

    let mut summary = Summary { items: rows.len(), ..Summary::default() };
    for (r, _) in &rows {
        summary.errors += usize::from(r.error.is_some());
        summary.mismatches += r.mismatches;
        for v in &r.verdicts {
            match v.status {
                Status::Holds => summary.holds += 1,
                Status::Violated => summary.violated += 1,
                Status::Inconclusive => summary.inconclusive += 1,
            }
        }
    }
    let mut constants = Vec::new();
    if matches!(command, Command::Verify | Command::Sweep) {
        let mut dims: Vec<usize> = rows.iter().map(|(r, _)| r.d).collect();
        dims.sort_unstable();
        dims.dedup();
        for d in dims {
            for q in &qs {
                constants.push(ConstantRow { d, q: q.clone(), constant: lev_constant(d as u32, q)? });
            }
        }
    }
    let csv = if command == Command::Sweep {
        let all: Vec<SweepRow> = rows.iter_mut().flat_map(|(_, s)| std::mem::take(s)).collect();
        Some(sweep_csv(&all, cfg.timing)?)
    } else {
        None
    };
    let report = Report {
        tool: "discrepancy",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config: cfg.clone(),
        constants,
        items: rows.into_iter().map(|(r, _)| r).collect(),
        summary,
        runtime_ms: cfg.timing.then(|| elapsed_ms(start)),
    };
    Ok(Outcome { report, csv })
}

fn run_item(command: Command, cfg: &RunConfig, qs: &[Rational], index: usize, item: &Item) -> (ItemReport, Vec<SweepRow>) {
    let start = Instant::now();
    let mut report = ItemReport {
        index,
        source: item.source.clone(),
        family: item.family.clone(),
        n: item.set.len(),
        d: item.set.dim(),
        results: Map::new(),
        verdicts: Vec::new(),
        error: None,
        runtime_ms: None,
        mismatches: 0,
    };
    let mut sweep = Vec::new();
    let outcome = match command {
        Command::Eval => eval_item(cfg, qs, &item.set, &mut report),
        Command::Identity => identity_item(cfg, index, &item.set, &mut report),
        Command::Extremal => extremal_item(cfg, &item.set, &mut report),
        Command::Lq => lq_item(cfg, qs, &item.set, &mut report),
        Command::Verify => verify_item(cfg, qs, &item.set, &mut report),
        Command::Sweep => sweep_item(cfg, qs, item, &mut report, &mut sweep),
        Command::Gen => Ok(()),
    };
    if let Err(e) = outcome {
        report.error = Some(e.to_string());
    }
    if cfg.timing {
        let ms = elapsed_ms(start);
        report.runtime_ms = Some(ms);
        for row in &mut sweep {
            row.runtime_ms = Some(ms);
        }
    }
    (report, sweep)
}

/// `L_q` of the unshifted set: exact for even integer `q`, Monte Carlo otherwise.
pub fn lq_value(cfg: &RunConfig, d: &PointSet, q: &Rational) -> Result<LqEstimate> {
    let (p, r) = exponent_parts(q)?;
    if r == 1 && p % 2 == 0 {
        let pow_q = lq_exact_even(d, p, &cfg.verify.budget)?;
        return Ok(LqEstimate::exact(p, pow_q));
    }
    lq_numeric(d, q, cfg.samples, cfg.seed)
}

fn to_value(v: &impl Serialize) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn with_float(mut v: Value, x: &Rational) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("float".into(), json!(render(x)));
    }
    v
}

fn eval_item(cfg: &RunConfig, qs: &[Rational], d: &PointSet, out: &mut ItemReport) -> Result<()> {
    out.results.insert("l2_squared".into(), exact(&l2_warnock(d)));
    let means: Map<String, Value> =
        IndexSubset::all(d.dim()).map(|j| (j.to_string(), exact(&set_mean_lambda(d, &j)))).collect();
    out.results.insert("lambda".into(), Value::Object(means));
    let mut lq = Vec::new();
    for q in qs {
        lq.push(to_value(&lq_value(cfg, d, q)?)?);
    }
    out.results.insert("lq".into(), Value::Array(lq));
    let linf = linf_exact(d, &cfg.verify.budget)?;
    out.results.insert("linf".into(), with_float(to_value(&linf)?, &linf.value));
    Ok(())
}

/// Anchors for the identity check: `0`, `(1, ..., 1)`, then random
/// coordinates drawn half from the set's own coordinates (with random side
/// flags) and half from a `1/64` grid.
fn identity_anchors(d: &PointSet, count: usize, seed: u64, stream: u64) -> Vec<Anchor> {
    let dim = d.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut out = vec![Anchor::zero(dim)];
    out.push(Anchor::exact(vec![int(1); dim]).expect("unit anchor"));
    while out.len() < count {
        let coords = (0..dim)
            .map(|k| {
                if rng.gen_bool(0.5) {
                    let p = &d.points()[rng.gen_range(0..d.len())];
                    let v = p.coords()[k].clone();
                    match rng.gen_range(0..3) {
                        0 => SidedValue::at(v),
                        1 if v > int(0) => SidedValue::left(v),
                        _ => SidedValue::right(v),
                    }
                } else {
                    SidedValue::at(rat(rng.gen_range(0..=64), 64))
                }
            })
            .collect();
        out.push(Anchor::new(coords).expect("coordinates in [0, 1]"));
    }
    out.truncate(count.max(1));
    out
}

fn identity_item(cfg: &RunConfig, index: usize, d: &PointSet, out: &mut ItemReport) -> Result<()> {
    let anchors = identity_anchors(d, cfg.anchors, cfg.seed, index as u64);
    let mut matches = 0usize;
    let mut first_mismatch = Value::Null;
    for (k, y) in anchors.iter().enumerate() {
        let lhs = set_l(d, y);
        let mut rhs = set_identity_rhs(d, y);
        if cfg.inject_fault && k == 0 {
            rhs += int(1);
        }
        if lhs == rhs {
            matches += 1;
        } else {
            out.mismatches += 1;
            if first_mismatch.is_null() {
                first_mismatch =
                    json!({ "anchor": to_value(y)?, "lhs": format_rational(&lhs), "rhs": format_rational(&rhs) });
            }
        }
    }
    out.results.insert("anchors".into(), json!(anchors.len()));
    out.results.insert("matches".into(), json!(matches));
    out.results.insert("mismatches".into(), json!(out.mismatches));
    if !first_mismatch.is_null() {
        out.results.insert("first_mismatch".into(), first_mismatch);
    }
    Ok(())
}

fn extremal_item(cfg: &RunConfig, d: &PointSet, out: &mut ItemReport) -> Result<()> {
    let budget = &cfg.verify.budget;
    let linf = linf_exact(d, budget)?;
    out.results.insert("linf".into(), with_float(to_value(&linf)?, &linf.value));
    let mut lambdas = Map::new();
    for j in IndexSubset::all(d.dim()) {
        let r = lambda_star(d, &j, cfg.verify.lambda_mode, budget)?;
        lambdas.insert(j.to_string(), with_float(to_value(&r)?, &r.value));
    }
    out.results.insert("lambda_star".into(), Value::Object(lambdas));
    let star = linf_star_exact(d, budget)?;
    out.results.insert("linf_star".into(), with_float(to_value(&star)?, &star.value));
    Ok(())
}

fn lq_search(cfg: &RunConfig) -> LqSearch {
    LqSearch { shift_evaluations: cfg.verify.shift_evaluations, budget: cfg.verify.budget.clone() }
}

fn lq_item(cfg: &RunConfig, qs: &[Rational], d: &PointSet, out: &mut ItemReport) -> Result<()> {
    let mut list = Vec::new();
    for q in qs {
        let value = lq_value(cfg, d, q)?;
        let star = lq_star_lower(d, q, &lq_search(cfg))?;
        let upper = match &star.upper {
            Some(u) => Some(u.clone()),
            None => lq_star_upper(d, q, cfg.verify.upper_nodes, &cfg.verify.budget)?,
        };
        list.push(json!({
            "q": format_rational(q),
            "lq": to_value(&value)?,
            "lq_star": to_value(&star)?,
            "lq_star_upper": upper.as_ref().map(exact),
        }));
    }
    out.results.insert("lq".into(), Value::Array(list));
    Ok(())
}

fn inequality_list(cfg: &RunConfig, d: &PointSet) -> Result<Vec<Inequality>> {
    Inequality::parse_list(&cfg.inequalities, d.dim())
}

fn verdicts_for(verifier: &mut Verifier<'_>, list: &[Inequality], q: &Rational) -> Result<Vec<Verdict>> {
    list.iter()
        .filter(|i| i.depends_on_q() && i.applies(q))
        .map(|i| verifier.verify(i, Some(q)))
        .collect()
}

fn verify_item(cfg: &RunConfig, qs: &[Rational], d: &PointSet, out: &mut ItemReport) -> Result<()> {
    let list = inequality_list(cfg, d)?;
    let mut verifier = Verifier::new(d, cfg.verify.clone());
    // q-free inequalities are reported once.
    for ineq in list.iter().filter(|i| !i.depends_on_q()) {
        out.verdicts.push(verifier.verify(ineq, None)?);
    }
    for q in qs {
        out.verdicts.extend(verdicts_for(&mut verifier, &list, q)?);
    }
    Ok(())
}

/// One sweep CSV row per `(set, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub family: String,
    pub source: String,
    pub n: usize,
    pub d: usize,
    pub q: Rational,
    pub linf: Option<f64>,
    pub lq: Option<f64>,
    pub lq_kind: String,
    pub lq_star_lower: Option<f64>,
    pub linf_star: Option<f64>,
    pub status: String,
    pub min_margin: Option<f64>,
    pub verdicts: String,
    pub error: String,
    pub runtime_ms: Option<f64>,
}

/// Column order of the sweep CSV; `runtime_ms` is appended with `--timing`.
pub const SWEEP_COLUMNS: [&str; 14] = [
    "family",
    "source",
    "n",
    "d",
    "q",
    "linf",
    "lq",
    "lq_kind",
    "lq_star_lower",
    "linf_star",
    "status",
    "min_margin",
    "verdicts",
    "error",
];

fn sweep_item(
    cfg: &RunConfig,
    qs: &[Rational],
    item: &Item,
    out: &mut ItemReport,
    rows: &mut Vec<SweepRow>,
) -> Result<()> {
    let d = &item.set;
    let list = inequality_list(cfg, d)?;
    let mut verifier = Verifier::new(d, cfg.verify.clone());
    let mut errors = Vec::new();
    let linf = verifier.linf().map(|r| render(&r.value)).map_err(|e| errors.push(e)).ok();
    let linf_star = verifier.linf_star().map(|r| render(&r.value)).map_err(|e| errors.push(e)).ok();
    let fixed: Vec<Verdict> =
        list.iter().filter(|i| !i.depends_on_q()).map(|i| verifier.verify(i, None)).collect::<Result<_>>()?;
    out.verdicts.extend(fixed.iter().cloned());
    for q in qs {
        let mut row_errors = errors.clone();
        let (lq, lq_kind) = match lq_value(cfg, d, q) {
            Ok(e) => (Some(e.value_float), serde_json::to_value(e.kind)?.as_str().unwrap_or("").to_string()),
            Err(e) => {
                row_errors.push(e.to_string());
                (None, String::new())
            }
        };
        let lq_star_lower = match verifier.lq_star(q, 0) {
            Ok(b) => Some(render(&b.lower)),
            Err(e) => {
                row_errors.push(e);
                None
            }
        };
        let mut verdicts = fixed.clone();
        verdicts.extend(verdicts_for(&mut verifier, &list, q)?);
        let status = [Status::Violated, Status::Inconclusive, Status::Holds]
            .into_iter()
            .find(|s| verdicts.iter().any(|v| v.status == *s))
            .map(|s| s.to_string())
            .unwrap_or_default();
        let min_margin = verdicts
            .iter()
            .filter(|v| v.status == Status::Holds)
            .filter_map(|v| v.margin.clone())
            .min()
            .map(|m| render(&m));
        let summary: Vec<String> = verdicts.iter().map(|v| format!("{}={}", v.inequality, v.status)).collect();
        rows.push(SweepRow {
            family: item.family.clone(),
            source: item.source.clone(),
            n: d.len(),
            d: d.dim(),
            q: q.clone(),
            linf,
            lq,
            lq_kind,
            lq_star_lower,
            linf_star,
            status,
            min_margin,
            verdicts: summary.join(";"),
            error: row_errors.join("; "),
            runtime_ms: None,
        });
        out.verdicts.extend(verdicts.into_iter().skip(fixed.len()));
    }
    out.results.insert("rows".into(), json!(rows.len()));
    Ok(())
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn sweep_csv(rows: &[SweepRow], timing: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = SWEEP_COLUMNS.to_vec();
    if timing {
        header.push("runtime_ms");
    }
    let csv_err = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![
            r.family.clone(),
            r.source.clone(),
            r.n.to_string(),
            r.d.to_string(),
            format_rational(&r.q),
            cell(r.linf),
            cell(r.lq),
            r.lq_kind.clone(),
            cell(r.lq_star_lower),
            cell(r.linf_star),
            r.status.clone(),
            cell(r.min_margin),
            r.verdicts.clone(),
            r.error.clone(),
        ];
        if timing {
            rec.push(cell(r.runtime_ms));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

/// Point sets for `gen`: one JSON object, or an array when the specs expand
/// to several sets.
pub fn generate(cfg: &RunConfig) -> Result<String> {
    let items = load_items(cfg, Command::Gen)?;
    let files: Vec<crate::kernel::PointSetFile> = items.iter().map(|i| (&i.set).into()).collect();
    Ok(match files.as_slice() {
        [one] => serde_json::to_string_pretty(one)?,
        many => serde_json::to_string_pretty(many)?,
    })
}

/// Sorted `(inequality, status)` counts, handy for summaries.
pub fn status_counts(report: &Report) -> BTreeMap<String, BTreeMap<String, usize>> {
    let mut m: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for item in &report.items {
        for v in &item.verdicts {
            *m.entry(v.inequality.id()).or_default().entry(v.status.to_string()).or_default() += 1;
        }
    }
    m
}
