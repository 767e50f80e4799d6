//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use discrepancy_core::extremal::{
    lambda_star, lev_constant, linf_exact, linf_star_exact, EnumerationBudget, Inequality, LambdaMode, Status,
    Verifier, VerifyOptions,
};
use discrepancy_core::gen::{apply_shift, default_corpus, gen_random};
use discrepancy_core::kernel::{
    chi_decomposition_check, lambda_alternant, lambda_expansion_check, omega_alternant, reconstruct_shifted,
    set_identity_rhs, set_l, set_l_shifted, set_shift_decomposition, IndexSubset, PointSet, ShiftVector, TorusPoint,
};
use discrepancy_core::lq::{l2_warnock, lq_exact_even};
use discrepancy_core::report::{self, Command, RunConfig};
use discrepancy_core::scalar::{format_rational, int, rat, to_f64, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{grid_linf, lambda_star_abs_1d, lq_pow_1d_numeric, random_anchor, random_coord, random_set, ratio};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut exact = 0;
    for k in 0..500 {
        let d = random_set(&mut rng, k % 4 + 1, 16);
        let y = random_anchor(&mut rng, &d);
        exact += usize::from(set_identity_rhs(&d, &y) == set_l(&d, &y));
    }
    check(exact == 500, format!("mean-value identity exact on {exact}/500 configurations (d = 1..4, N <= 16)"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut chi = 0;
    for _ in 0..1000 {
        let x = random_coord(&mut rng) + int(rng.gen_range(-2..=2));
        let y = random_coord(&mut rng) + int(rng.gen_range(0..=1)) * random_coord(&mut rng);
        let y = if y > int(1) { int(1) } else { y };
        chi += usize::from(chi_decomposition_check(&x, &y));
    }
    let mut expansion = 0;
    for _ in 0..1000 {
        let dim = rng.gen_range(1..=4);
        let x = TorusPoint::new((0..dim).map(|_| random_coord(&mut rng)));
        let j = IndexSubset::from_mask(dim, rng.gen_range(0..1u32 << dim));
        expansion += usize::from(lambda_expansion_check(&x, &j));
    }
    let mut collapse = 0;
    for _ in 0..500 {
        let dim = rng.gen_range(1..=4);
        let d = random_set(&mut rng, dim, 1);
        let y = random_anchor(&mut rng, &d);
        let j = IndexSubset::from_mask(dim, rng.gen_range(1..1u32 << dim));
        let x = &d.points()[0];
        collapse += usize::from(lambda_alternant(x, &y, &j) == omega_alternant(x, &y, &j));
    }
    check(
        chi == 1000 && expansion == 1000 && collapse == 500,
        format!("indicator decomposition {chi}/1000, mean expansion {expansion}/1000, alternant collapse {collapse}/500"),
    )
}

fn criterion_3() -> Outcome {
    let budget = EnumerationBudget::default();
    let mut sets: Vec<PointSet> = default_corpus().into_iter().filter(|d| d.dim() <= 3 && d.len() <= 12).collect();
    for seed in 0..100u64 {
        let dim = (seed % 3 + 1) as usize;
        let n = (seed as usize * 7) % 12 + 1;
        sets.push(gen_random(n, dim, [8, 10, 12, 16][(seed % 4) as usize], seed).unwrap());
    }
    let mut equal = 0;
    let mut failures = Vec::new();
    for d in &sets {
        match lq_exact_even(d, 2, &budget) {
            Ok(v) if v == l2_warnock(d) => equal += 1,
            Ok(_) => failures.push(d.label().to_string()),
            Err(e) => failures.push(format!("{}: {e}", d.label())),
        }
    }
    check(
        equal == sets.len() && sets.len() >= 100,
        format!("closed-form L2^2 equals cell integration on {equal}/{} sets{}", sets.len(), listed(&failures)),
    )
}

fn criterion_4() -> Outcome {
    let budget = EnumerationBudget::default();
    let d = PointSet::new(1, vec![TorusPoint::new([rat(1, 2)])], "").unwrap();
    let j = IndexSubset::full(1);
    let linf = linf_exact(&d, &budget).unwrap().value;
    let l2 = lq_exact_even(&d, 2, &budget).unwrap();
    let lambda = lambda_star(&d, &j, LambdaMode::Abs, &budget).unwrap().value;
    let lambda_plain = lambda_star(&d, &j, LambdaMode::Plain, &budget).unwrap().value;
    let star = linf_star_exact(&d, &budget).unwrap().value;

    // Reference values: the integer anchor grid approaches L_inf from below
    // within N/R; midpoint quadrature for L2^2; the piecewise-linear mean for
    // lambda*; and for L_inf* the shifted grid with the point moved to 0.
    let mut oracle = true;
    for r in [64i128, 256, 1024] {
        let (num, den) = grid_linf(&d, r);
        let g = ratio(num, den);
        oracle &= g <= linf && &linf - &g <= ratio(1, r);
        let moved = apply_shift(&d, &ShiftVector::exact([rat(1, 2)])).unwrap();
        let (num, den) = grid_linf(&moved, r);
        let g = ratio(num, den);
        oracle &= g <= star && &star - &g <= ratio(1, r);
    }
    oracle &= (lq_pow_1d_numeric(&[0.5], 2.0, 1 << 16) - to_f64(&l2)).abs() < 1e-9;
    oracle &= lambda_star_abs_1d(&[rat(1, 2)]) == lambda;

    let expected = [linf == rat(1, 2), l2 == rat(1, 12), lambda == rat(1, 2), lambda_plain == rat(1, 2), star == int(1)];
    check(
        expected.iter().all(|&b| b) && oracle,
        format!(
            "D = {{1/2}}: L_inf = {}, L2^2 = {}, lambda*_1 = {}, L_inf* = {}; reference checks {}",
            format_rational(&linf),
            format_rational(&l2),
            format_rational(&lambda),
            format_rational(&star),
            if oracle { "agree" } else { "disagree" }
        ),
    )
}

fn criterion_5() -> Outcome {
    let corpus = default_corpus();
    let qs = [int(1), int(2), int(4)];
    let opts = VerifyOptions::default();
    let mut counts: BTreeMap<(String, Status), usize> = BTreeMap::new();
    let mut inconclusive_low_dim = 0;
    let mut violated = 0;
    let mut corrected = (0usize, 0usize);
    for d in &corpus {
        let mut list = Inequality::parse_list("lemma3,lemma1,lemma2,corollary", d.dim()).unwrap();
        list.extend(Inequality::parse_list("mean_bound", d.dim()).unwrap());
        let mut verifier = Verifier::new(d, opts.clone());
        for ineq in &list {
            let runs: Vec<Option<&Rational>> =
                if ineq.depends_on_q() { qs.iter().map(Some).collect() } else { vec![None] };
            for q in runs {
                let v = verifier.verify(ineq, q).unwrap();
                if let Inequality::MeanBound(_) = ineq {
                    corrected.0 += 1;
                    corrected.1 += usize::from(v.status == Status::Holds);
                    continue;
                }
                let name = ineq.id().split('[').next().unwrap().to_string();
                *counts.entry((name, v.status)).or_default() += 1;
                if v.status == Status::Violated {
                    violated += 1;
                }
                if v.status == Status::Inconclusive && d.dim() <= 2 {
                    inconclusive_low_dim += 1;
                }
            }
        }
    }
    let c21 = lev_constant(2, &int(1)).unwrap().value == Some(rat(25, 4));
    let summary: Vec<String> = counts.iter().map(|((n, s), k)| format!("{n} {s} {k}")).collect();
    println!("    verdicts on {} sets: {}", corpus.len(), summary.join(", "));
    println!(
        "    with factor 2^(|J|-d) in place of 2^(d-|J|): {}/{} HOLDS",
        corrected.1, corrected.0
    );
    check(
        violated == 0 && inconclusive_low_dim == 0 && c21,
        format!(
            "{violated} VIOLATED, {inconclusive_low_dim} INCONCLUSIVE for d <= 2, C_(2,1) = 25/4 {}",
            if c21 { "echoed" } else { "missing" }
        ),
    )
}

fn criterion_6() -> Outcome {
    let corpus: Vec<PointSet> = default_corpus().into_iter().filter(|d| d.dim() == 1).collect();
    let mut holds = 0;
    let mut open = 0;
    let mut bad = 0;
    for d in &corpus {
        let mut verifier = Verifier::new(d, VerifyOptions::default());
        for q in [rat(1, 2), rat(1, 4)] {
            let v = verifier.verify(&Inequality::Interpolation, Some(&q)).unwrap();
            match v.status {
                Status::Holds => holds += 1,
                Status::Inconclusive if v.lhs.is_some() && v.rhs.is_some() => open += 1,
                _ => bad += 1,
            }
        }
    }
    check(
        bad == 0,
        format!("{} sets, q in {{1/2, 1/4}}: {holds} HOLDS, {open} INCONCLUSIVE with bounds, {bad} other", corpus.len()),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut exact = 0;
    let mut max_terms = 0;
    let mut within = true;
    for k in 0..500 {
        let dim = k % 3 + 1;
        let d = random_set(&mut rng, dim, 10);
        let y = random_anchor(&mut rng, &d);
        let z = ShiftVector::exact((0..dim).map(|_| random_coord(&mut rng)));
        let terms = set_shift_decomposition(dim, &y, &z).unwrap();
        let nonzero = terms.iter().filter(|t| t.coefficient != 0).count();
        max_terms = max_terms.max(nonzero);
        within &= nonzero <= 3usize.pow(dim as u32);
        let direct = set_l(&apply_shift(&d, &z).unwrap(), &y);
        let rebuilt = reconstruct_shifted(&d, &terms);
        exact += usize::from(rebuilt == direct && set_l_shifted(&d, &z, &y).unwrap() == direct);
    }
    check(
        exact == 500 && within,
        format!("reconstruction exact {exact}/500, largest term count {max_terms} (bound 3^d)"),
    )
}

fn criterion_8() -> Outcome {
    let budget = EnumerationBudget::default();
    let sets: Vec<PointSet> = default_corpus().into_iter().filter(|d| d.dim() <= 2).take(20).collect();
    let mut ok = 0;
    let mut worst = Vec::new();
    for d in &sets {
        let exact = linf_exact(d, &budget).unwrap().value;
        let mut gaps = Vec::new();
        let mut below = true;
        for r in [256i128, 512, 1024, 2048] {
            let (num, den) = grid_linf(d, r);
            let g = ratio(num, den);
            below &= g <= exact;
            gaps.push((&exact - g, r));
        }
        let monotone = gaps.windows(2).all(|w| w[1].0 <= w[0].0);
        // Moving an anchor by 1/R per coordinate changes N v(Y) by at most N d / R.
        let (last, r) = gaps.last().unwrap();
        let converging = *last <= ratio((d.len() * d.dim()) as i128, *r);
        if below && monotone && converging {
            ok += 1;
        } else {
            worst.push(d.label().to_string());
        }
    }
    check(
        ok == sets.len() && sets.len() == 20,
        format!("grid values below L_inf with nonincreasing gap on {ok}/{} sets{}", sets.len(), listed(&worst)),
    )
}

fn criterion_9() -> Outcome {
    let cfg = |jobs| RunConfig {
        generator: vec!["korobov:n=5..13,a=2,d=2".into(), "random:n=4,d=1,den=16,seed=3".into()],
        q: vec!["1,2".into()],
        inequalities: "lemma1,lemma3,corollary,mean_bound".into(),
        jobs,
        ..RunConfig::default()
    };
    let run = |jobs| report::run(Command::Sweep, &cfg(jobs)).unwrap().csv.unwrap();
    let a = run(1);
    let b = run(1);
    let c = run(8);
    let rows = a.lines().count() - 1;
    check(
        a == b && a == c && rows == 20,
        format!("{rows} rows; rerun at 1 thread {}, 8 threads {}", same(&a, &b), same(&a, &c)),
    )
}

fn listed(names: &[String]) -> String {
    if names.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", names.join(", "))
    }
}

fn same(a: &str, b: &str) -> &'static str {
    if a == b {
        "byte-identical"
    } else {
        "DIFFERENT"
    }
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "main identity", Duration::from_secs(10), criterion_1),
        (2, "proof identities", Duration::from_secs(10), criterion_2),
        (3, "L2 closed form vs cells", Duration::from_secs(60), criterion_3),
        (4, "one-point spot values", Duration::from_secs(10), criterion_4),
        (5, "inequality chain", Duration::from_secs(300), criterion_5),
        (6, "interpolation, q < 1", Duration::from_secs(60), criterion_6),
        (7, "shift decomposition", Duration::from_secs(30), criterion_7),
        (8, "grid convergence to L_inf", Duration::from_secs(60), criterion_8),
        (9, "sweep determinism", Duration::from_secs(300), criterion_9),
    ];
    let mut failed = Vec::new();
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let pass = out.pass && took <= limit;
        println!(
            "{} criterion {n} ({name}): {} [{:.1} s, limit {} s]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
        if !pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("all criteria passed");
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
