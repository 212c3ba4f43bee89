//! Acceptance run: one PASS/FAIL line per criterion, exact comparisons only,
//! each with a wall-clock limit.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rayon::prelude::*;

use qseries::dsl::{self, Expansion, Expr, ZMon};
use qseries::lattice::{enumerate_zero_sum, q_form_twice};
use qseries::partitions::{count_t_cores, crank_counts};
use qseries::series::QSeries;
use qseries::verify::{find_entry, format_params, run_entry, IdentityReport, Params, Verdict};

type Outcome = Result<String, String>;

fn run(id: &str, keep: impl Fn(&Params) -> bool + Sync, order: Option<usize>) -> Result<Vec<IdentityReport>, String> {
    let entry = find_entry(id).map_err(|e| e.to_string())?;
    let grid: Vec<Params> = (entry.grid)().into_iter().filter(|p| keep(p)).collect();
    if grid.is_empty() {
        return Err(format!("{id}: empty grid"));
    }
    grid.par_iter()
        .map(|p| run_entry(id, p, order, None).map_err(|e| format!("{id} [{}]: {e}", format_params(p))))
        .collect()
}

fn all(_: &Params) -> bool {
    true
}

fn at_most(name: &'static str, max: i64) -> impl Fn(&Params) -> bool + Sync {
    move |p| p.get(name).is_some_and(|&v| v <= max)
}

/// Run and require every report to carry `want`; returns the number of runs.
fn expect(id: &str, keep: impl Fn(&Params) -> bool + Sync, order: Option<usize>, want: Verdict) -> Result<usize, String> {
    let reports = run(id, keep, order)?;
    match reports.iter().find(|r| r.verdict != want) {
        Some(r) => Err(r.to_string()),
        None => Ok(reports.len()),
    }
}

fn pass(id: &str, keep: impl Fn(&Params) -> bool + Sync, order: Option<usize>) -> Result<usize, String> {
    expect(id, keep, order, Verdict::Pass)
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn criterion_1() -> Outcome {
    let n = pass("thm1", all, Some(60))? + pass("thm1-a2", all, Some(60))?;
    Ok(format!("{n} runs: lattice sums equal their products for a = 2..6; a = 2 two-term form"))
}

fn criterion_2() -> Outcome {
    let n = pass("thm2", at_most("a", 5), Some(40))?;
    let v = pass("vanishB", at_most("a", 5), Some(40))?;
    Ok(format!("{n} (a, j) runs cross-multiplied and j-independent; {v} vanishing checks"))
}

fn criterion_3() -> Outcome {
    let n = pass("klyachko", at_most("t", 7), Some(80))? + pass("klyachko-cyc", at_most("t", 7), Some(80))?;
    Ok(format!("{n} runs at order 80, cyclotomic coefficients rational integers"))
}

fn criterion_4() -> Outcome {
    let n = pass("saito", at_most("N", 60), Some(200))?;
    let pairs = [(5, 3), (2, 3), (7, 5)];
    let c2 = pass("saito-case2", |p| pairs.contains(&(p["p"], p["M"])), Some(60))?;
    check(c2 == pairs.len(), || format!("expected {} factorization runs, got {c2}", pairs.len()))?;
    let c3 = pass("saito-case3", |p| [12, 18].contains(&(p["p"].pow(p["alpha"] as u32) * p["M"])), Some(40))?;
    Ok(format!("{n} nonnegativity scans at order 200; {c2} factorizations; {c3} three-factor cases"))
}

fn criterion_5() -> Outcome {
    let n = pass("pcore", at_most("t", 7), Some(26))? + pass("tcore", at_most("t", 7), Some(26))?;
    for t in 1..=7u64 {
        let x = dsl::expand(&format!("E(q^{t})^{t} / E(q)"), 26, None).map_err(|e| e.to_string())?;
        let Expansion::Q(s) = x.series else { return Err("expected a q-series".into()) };
        for m in 0..=25u64 {
            let want = BigInt::from(count_t_cores(t, m));
            let got = &s.coeffs()[m as usize];
            check(*got == want, || format!("t={t} n={m}: product {got}, hook count {want}"))?;
            if t >= 4 && m >= 1 {
                check(want > BigInt::from(0), || format!("a_{t}({m}) = {want}"))?;
            }
        }
    }
    Ok(format!("{n} catalog runs; hook-length counts agree for t <= 7, n <= 25"))
}

fn crank_expansion(order: usize) -> Result<qseries::bivar::ZqSeries, String> {
    let x = dsl::expand("E(q) / poch[z q; q] / poch[z^-1 q; q]", order, None).map_err(|e| e.to_string())?;
    match x.series {
        Expansion::Zq(s) => Ok(s),
        Expansion::Q(_) => Err("expected a bivariate series".into()),
    }
}

fn criterion_6() -> Outcome {
    let n = pass("crankgen", all, Some(21))? + pass("crankgen-nonneg", all, Some(21))?;
    let n = n + pass("crank5", all, Some(9))? + pass("crank11", all, Some(9))?;
    let s = crank_expansion(21)?;
    for m in 2..=20u64 {
        let counts = crank_counts(m);
        let row = &s.rows()[m as usize];
        let got: Vec<(i64, BigInt)> = row.iter().map(|(&d, c)| (d, c.clone())).collect();
        let want: Vec<(i64, BigInt)> = counts.iter().map(|(&d, &c)| (d, BigInt::from(c))).collect();
        check(got == want, || format!("crank counts differ at n = {m}"))?;
    }
    let negatives: Vec<(i64, usize)> = s.terms().filter(|(_, _, c)| *c < &BigInt::from(0)).map(|(d, e, _)| (d, e)).collect();
    check(negatives == [(0, 1)], || format!("negative coefficients at {negatives:?}"))?;
    let big = crank_expansion(91)?;
    let residue = |e: usize, r: i64| -> BigInt {
        big.rows()[e].iter().filter(|(&d, _)| d.rem_euclid(11) == r).map(|(_, c)| c.clone()).sum()
    };
    let mut fails = Vec::new();
    for k in (0..).take_while(|k| 11 * k + 2 <= 90) {
        let e = 11 * k + 2;
        if residue(e, 2) <= residue(e, 1) {
            fails.push(k);
        }
    }
    check(fails == [3], || format!("mod-11 strict inequality fails at {fails:?}"))?;
    Ok(format!("{n} catalog runs; crank table n = 2..20; only negative at z^0 q^1; mod-11 exception only at n = 3"))
}

fn criterion_7() -> Outcome {
    let mut n = pass("gqpib", at_most("a", 5), Some(50))?;
    n += pass("quin", all, None)?;
    for id in ["gqpi-fe", "theta-fe", "rhs-fe", "thm2-fe"] {
        n += pass(id, at_most("a", 5), None)?;
    }
    Ok(format!("{n} runs: product identity for a = 1..5, quintuple coincidence, functional equations"))
}

fn criterion_8() -> Outcome {
    let mut n = 0;
    let in_1_3 = |p: &Params| ["alpha", "beta"].iter().all(|k| (1..=3).contains(&p[*k]));
    let signs = run("atq", in_1_3, Some(40))?;
    check(
        signs.iter().any(|r| r.params["s1"] < 0) && signs.iter().any(|r| r.params["s2"] < 0),
        || "sign grid does not cover negative signs".into(),
    )?;
    n += pass("atq", in_1_3, Some(40))?;
    n += pass("atqfin", in_1_3, Some(40))?;
    n += pass("coratq1", |p| ["a", "b", "M"].iter().all(|k| (1..=3).contains(&p[*k])), Some(40))?;
    n += pass("aci", |p| (2..=4).contains(&p["m"]), Some(40))?;
    for id in ["zq", "res1", "res2", "ekin1", "ekin2"] {
        n += pass(id, all, Some(40))?;
    }
    n += pass("ekin-iter", |p| p["depth"] == 5, Some(32))?;
    n += pass("eta1a", |p| p["m"] <= 5 && p["n"] <= 4, Some(40))?;
    n += pass("eta1b", |p| p["m"] <= 6 && p["n"] <= 4, Some(40))?;
    n += pass("eta2", |p| p["m"] <= 5 && p["n"] <= 5, Some(40))?;
    n += pass("vn", at_most("n", 6), Some(40))?;
    Ok(format!("{n} runs at order 40 (iteration depth 5 at order 32)"))
}

fn criterion_9() -> Outcome {
    let mut evidence = 0;
    for item in 'a'..='h' {
        evidence += expect(&format!("conj2{item}"), all, Some(60), Verdict::Evidence)?;
    }
    let mut proved = 0;
    for id in ["conj2c3", "conj2c4", "conj2e2", "conj2f2", "conj2g2", "conj2ea"] {
        proved += pass(id, all, Some(40))?;
    }
    Ok(format!("{evidence} evidence verdicts, no violations; {proved} proved subcases"))
}

fn series_triple() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    (1usize..24).prop_flat_map(|n| {
        let v = || prop::collection::vec(-40i64..40, n);
        (v(), v(), v())
    })
}

fn ring_laws(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&series_triple(), |(a, b, c)| {
            let (x, y, z) = (QSeries::from_i64s(&a), QSeries::from_i64s(&b), QSeries::from_i64s(&c));
            prop_assert_eq!(x.add(&y), y.add(&x));
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            prop_assert!(x.sub(&x).is_zero());
            prop_assert_eq!(x.mul(&QSeries::one(a.len())), x.clone());
            let mut unit = b.clone();
            unit[0] = 1;
            let u = QSeries::from_i64s(&unit);
            let inv = u.invert().unwrap();
            prop_assert_eq!(x.mul(&u).mul(&inv), x);
            Ok(())
        })
        .map_err(|e| format!("ring law: {e}"))
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let mon = (-3i64..=3, -3i64..=3).prop_map(|(z, q)| ZMon { z, q });
    let leaf = prop_oneof![
        (-9i64..=9).prop_map(Expr::Int),
        (1u64..=6).prop_map(Expr::Eta),
        (1u64..=6).prop_map(Expr::E),
        (mon.clone(), 1u64..=4).prop_map(|(m, s)| Expr::Poch(m, s)),
        (mon, 1u64..=4).prop_map(|(m, s)| Expr::Bracket(m, s)),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner, -3i64..=4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
        ]
    })
}

fn round_trip(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&expr_strategy(), |e| {
            let text = e.to_string();
            let back = dsl::parse(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
            prop_assert_eq!(back, e);
            Ok(())
        })
        .map_err(|e| format!("parser round trip: {e}"))
}

/// Zero-sum points with `Q_a(n) <= bound` by scanning a box. On the zero-sum
/// lattice `2Q >= a s - (a-1) sqrt(a s)` with `s = n·n`, which bounds every
/// `|n_i| <= sqrt(s)`.
fn naive_box(a: usize, bound: i64) -> Vec<(i64, Vec<i64>)> {
    let ai = a as i64;
    let fits = |r: i64| {
        let lhs = ai * r * r - 2 * bound;
        lhs <= 0 || lhs * lhs <= (ai - 1) * (ai - 1) * r * r * ai
    };
    let mut radius = 0;
    while fits(radius + 1) {
        radius += 1;
    }
    let side = 2 * radius + 1;
    let mut out = Vec::new();
    for mut idx in 0..side.pow(a as u32 - 1) {
        let mut n = Vec::with_capacity(a);
        for _ in 0..a - 1 {
            n.push(idx % side - radius);
            idx /= side;
        }
        n.push(-n.iter().sum::<i64>());
        let twice = q_form_twice(&n);
        if twice <= 2 * bound {
            out.push((twice / 2, n));
        }
    }
    out.sort();
    out
}

fn criterion_10() -> Outcome {
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 256, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    ring_laws(&mut runner)?;
    round_trip(&mut runner)?;
    let mut points = 0;
    for a in 1..=6usize {
        for bound in [0, 1, 7, 23, 40] {
            let got: Vec<(i64, Vec<i64>)> = enumerate_zero_sum(a, bound).into_iter().map(|p| (p.qexp, p.n)).collect();
            let want = naive_box(a, bound);
            check(got == want, || format!("enumeration differs from box scan at a={a}, bound={bound}"))?;
            points += got.len();
        }
    }
    let q = pass("qdiff", all, Some(40))?;
    let exprs = ["E(q)", "eta(2)^3 * E(q^3) / E(q)", "bracket[z; q] * E(q)", "E(q)^2 / bracket[z^2 q; q^3]"];
    let bin = env!("CARGO_BIN_EXE_qseries");
    for text in exprs {
        let cli = |_| {
            Command::new(bin)
                .args(["expand", text, "--order", "12", "--window", "6", "--json"])
                .output()
                .map(|o| o.stdout)
                .map_err(|e| e.to_string())
        };
        let (first, second) = (cli(0)?, cli(1)?);
        check(first == second, || format!("{text}: two runs differ"))?;
        let lib = dsl::expand(text, 12, Some(6)).map_err(|e| e.to_string())?.to_json_string() + "\n";
        check(first == lib.as_bytes(), || format!("{text}: binary and library output differ"))?;
    }
    let euler = dsl::expand("E(q)", 3, None).map_err(|e| e.to_string())?.to_json_string();
    let want = "{\n  \"coeffs\": [\n    [\n      0,\n      \"1\"\n    ],\n    [\n      1,\n      \"-1\"\n    ],\n    [\n      2,\n      \"-1\"\n    ]\n  ],\n  \"expr\": \"E(q)\",\n  \"order\": 3,\n  \"prefactor24\": 0,\n  \"window\": null\n}";
    check(euler == want, || format!("unexpected JSON layout:\n{euler}"))?;
    Ok(format!(
        "ring laws and parser round trip on 256 cases each; {points} lattice points match the box scan; {q} difference runs; JSON byte-stable"
    ))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 10] = [
        (1, "lattice theta sums vs products", 60, criterion_1),
        (2, "cyclotomic theta sums and their zeros", 120, criterion_2),
        (3, "t-core lattice sums", 60, criterion_3),
        (4, "Saito nonnegativity and factorizations", 300, criterion_4),
        (5, "t-core counts and positivity", 30, criterion_5),
        (6, "crank generating function and inequalities", 60, criterion_6),
        (7, "generalized quintuple product identity", 120, criterion_7),
        (8, "product inequalities and eta identities", 180, criterion_8),
        (9, "positivity conjecture scan", 180, criterion_9),
        (10, "infrastructure properties", 60, criterion_10),
    ];
    let mut failed = 0;
    for (num, title, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let late = elapsed > Duration::from_secs(limit);
        let (ok, detail) = match outcome {
            Ok(d) if !late => (true, d),
            Ok(d) => (false, format!("{d}; over the {limit}s limit")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {num:>2} {} {title} ({:.2}s of {limit}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
