//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so every line is printed on a normal
//! `cargo test`. Exits nonzero if any criterion fails other than those listed
//! in `UNATTAINABLE`; those must still fail, so a stale entry is also an error.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use shplus_core::brieskorn::{self, cz_gamma0, cz_gamma_pm, parity_report, BrieskornParams, Parity, Sign};
use shplus_core::ellipsoid::{cz_ellipsoid, ekeland_lasry_certificate, EllipsoidParams};
use shplus_core::exact_algebra::{int, rat, verify_complex, BigRational};
use shplus_core::invariants::{assemble_invariant, ustilovsky_report, InvariantReport, Verdict};
use shplus_core::line_bundle::{catalog, check_bundle_hypotheses, orbit_lower_bound};
use shplus_core::orbit_model::{Action, Convention, DegreeWindow};
use shplus_core::tower_complex::{build_tower_with_sign, stabilization_check, tower_homology};
use shplus_core::Error;

mod common;
use common::rotation_crossing_index;

/// Criteria that cannot hold as stated; see the README.
const UNATTAINABLE: &[&str] = &["4"];

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs, || {
        format!("took {:.2} s, limit {limit_secs} s", elapsed.as_secs_f64())
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let (mut good_count, mut bad_count) = (0, 0);
    for _ in 0..500 {
        let mu = rng.gen_range(-50..=50);
        let k = rng.gen_range(1..=9);
        let good = rng.gen_bool(0.5);
        let n = rng.gen_range(0..=10);
        let plus = build_tower_with_sign(mu, k, good, n, 1).map_err(|e| e.to_string())?;
        let minus = build_tower_with_sign(mu, k, good, n, -1).map_err(|e| e.to_string())?;
        ensure(verify_complex(&plus.complex) && verify_complex(&minus.complex), || {
            format!("∂∘∂ ≠ 0 for mu={mu} k={k} N={n}")
        })?;
        let h = tower_homology(&plus).map_err(|e| e.to_string())?;
        let expected: BTreeMap<i64, usize> = if good {
            good_count += 1;
            BTreeMap::from([(-mu, 1), (-mu + 1 + 2 * n as i64, 1)])
        } else {
            bad_count += 1;
            BTreeMap::new()
        };
        ensure(h == expected, || format!("mu={mu} k={k} good={good} N={n}: {h:?}"))?;
        ensure(tower_homology(&minus).map_err(|e| e.to_string())? == h, || {
            format!("sign changes ranks for mu={mu} k={k} N={n}")
        })?;
    }
    within(start.elapsed(), 5.0)?;
    Ok(format!(
        "500 towers ({good_count} good, {bad_count} bad), both signs, {:.2} s",
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let eps_sets = [vec![rat(1, 101)], vec![rat(1, 101), rat(1, 103)]];
    let mut slowest = 0.0f64;
    let mut total_orbits = 0;
    for p in [7u32, 9, 15, 17] {
        for eps in &eps_sets {
            let start = Instant::now();
            let params = BrieskornParams::new(p, eps.len(), eps.clone()).map_err(|e| e.to_string())?;
            let s = brieskorn::enumerate_orbits(&params, &Action::pi(int(50))).map_err(|e| format!("p={p} m={}: {e}", eps.len()))?;
            ensure(parity_report(&s) == Parity::AllEven, || format!("p={p} m={}: parity {:?}", eps.len(), parity_report(&s)))?;
            assemble_invariant(&s, Convention::MinusCz).map_err(|e| format!("p={p} m={}: {e}", eps.len()))?;
            total_orbits += s.len();
            within(start.elapsed(), 2.0)?;
            slowest = slowest.max(start.elapsed().as_secs_f64());
        }
    }
    Ok(format!("8 cases at 50π, {total_orbits} orbits, all even, slowest {slowest:.2} s"))
}

fn criterion_3() -> Outcome {
    let closed_form = |p: i64, n: i64, big_n: i64| 2 * big_n * p * (n - 2) + 4 * big_n;
    let g7 = cz_gamma0(7, 3, 1);
    let g9 = cz_gamma0(9, 3, 1);
    ensure(g7 == closed_form(7, 3, 1) && g7 == 18, || format!("cz_gamma0(7,3,1) = {g7}"))?;
    ensure(g9 == closed_form(9, 3, 1) && g9 == 22, || format!("cz_gamma0(9,3,1) = {g9}"))?;
    let params = BrieskornParams::new(7, 1, vec![rat(1, 10)]).map_err(|e| e.to_string())?;
    let plus = cz_gamma_pm(&params, 1, Sign::Plus, 1).map_err(|e| e.to_string())?;
    let minus = cz_gamma_pm(&params, 1, Sign::Minus, 1).map_err(|e| e.to_string())?;
    // ⌊2/(7·11/10)⌋ = ⌊20/77⌋ = 0, ⌊10/11⌋ = 0 → 2;  ⌊20/63⌋ = 0, ⌊10/9⌋ = 1 → 4
    ensure(plus == 2 && minus == 4, || format!("gamma± = {plus}, {minus}"))?;
    Ok(format!("cz_gamma0 = 18, 22; cz_gamma± = {plus}, {minus}"))
}

fn golden_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/ustilovsky_7_9_eps_1_101.json")
}

fn comparison_digest(verdict: &Verdict, window: &Option<DegreeWindow>) -> Value {
    serde_json::json!({ "verdict": verdict, "window": window })
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let cutoff = Action::pi(int(30));
    let report = ustilovsky_report(7, 9, 1, &[rat(1, 10)], &cutoff, 40).map_err(|e| e.to_string())?;
    let Verdict::Distinct { witness_degree, .. } = report.comparison.verdict else {
        return Err(format!("verdict {:?}", report.comparison.verdict));
    };
    let same = ustilovsky_report(7, 7, 1, &[rat(1, 10)], &cutoff, 40).map_err(|e| e.to_string())?;
    ensure(same.comparison.verdict == Verdict::EqualUpToShift { shift: 0 }, || format!("{:?}", same.comparison.verdict))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!("Distinct, witness degree {witness_degree}"))
}

/// Same desk check with a perturbation that is generic below 30π.
fn criterion_4_generic() -> Outcome {
    let start = Instant::now();
    let cutoff = Action::pi(int(30));
    let eps = [rat(1, 101)];
    let report = ustilovsky_report(7, 9, 1, &eps, &cutoff, 40).map_err(|e| e.to_string())?;
    let c = &report.comparison;
    let Verdict::Distinct { witness_degree, witness_shift, ranks } = c.verdict else {
        return Err(format!("verdict {:?}", c.verdict));
    };
    let digest = comparison_digest(&c.verdict, &c.window);
    let golden: Value = serde_json::from_str(
        &std::fs::read_to_string(golden_path()).map_err(|e| format!("golden file: {e}"))?,
    )
    .map_err(|e| format!("golden file: {e}"))?;
    ensure(digest == golden, || format!("digest {digest} differs from golden {golden}"))?;
    // the witness is a real disagreement of the two windowed modules
    let d = witness_degree;
    ensure(
        report.first.module.rank(d) == ranks.0 && report.second.module.rank(d + witness_shift) == ranks.1 && ranks.0 != ranks.1,
        || format!("witness {d} does not separate the modules"),
    )?;
    let same = ustilovsky_report(7, 7, 1, &eps, &cutoff, 40).map_err(|e| e.to_string())?;
    ensure(same.comparison.verdict == Verdict::EqualUpToShift { shift: 0 }, || format!("{:?}", same.comparison.verdict))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!(
        "ε=1/101: Distinct, witness degree {d} (ranks {} vs {}), matches golden; (7,7) EqualUpToShift(0)",
        ranks.0, ranks.1
    ))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let a = [int(1), rat(101, 100), rat(102, 100)];
    let cert = ekeland_lasry_certificate(&a, &int(1), &rat(169, 100)).map_err(|e| e.to_string())?;
    ensure(cert.pinching_ok && cert.n == 3 && cert.distinct_count == 3, || format!("{cert:?}"))?;
    ensure(cert.generator_actions.len() == 3, || "generator count".into())?;
    ensure(
        cert.window_lo == Action::pi(rat(17238, 10000)) && cert.window_hi == Action::pi(int(2)),
        || format!("window ({}, {})", cert.window_lo, cert.window_hi),
    )?;
    ensure(cert.window_lo.value < cert.window_hi.value, || "empty window".into())?;
    let expected = [rat(169, 100), rat(17069, 10000), rat(17238, 10000)];
    let actions: Vec<BigRational> = cert.generator_actions.iter().map(|x| x.value.clone()).collect();
    ensure(actions == expected, || format!("generators {actions:?}"))?;
    let t = &cert.chosen_t.value;
    for x in &actions {
        ensure(x < t && t < &(x * int(2)), || format!("T = {t} does not separate {x} from its double"))?;
    }
    ensure(cert.min_period_bound == Action::pi(int(1)), || format!("bound {}", cert.min_period_bound))?;
    match ekeland_lasry_certificate(&a, &int(1), &int(2)) {
        Err(Error::PinchingViolated { .. }) => {}
        other => return Err(format!("R2^2 = 2 gave {other:?}")),
    }
    within(start.elapsed(), 1.0)?;
    Ok(format!("window ({}, {}), T = {}, 3 generators; R2^2 = 2 rejected", cert.window_lo, cert.window_hi, cert.chosen_t))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(6);
    let (mut agreed, mut resonant) = (0, 0);
    while agreed < 200 {
        let n = rng.gen_range(1..=4);
        let mut a: Vec<BigRational> = (0..n).map(|_| rat(rng.gen_range(10..=90), rng.gen_range(7..=17))).collect();
        a.sort();
        a.dedup();
        let Ok(params) = EllipsoidParams::new(a.clone(), int(1)) else { continue };
        let k = rng.gen_range(1..=a.len());
        let iterate = rng.gen_range(1..=8);
        match (cz_ellipsoid(&params, k, iterate), rotation_crossing_index(&a, k, iterate)) {
            (Ok(mu), Some(e)) if mu == e => agreed += 1,
            (Err(Error::ResonantParameter(_)), None) => resonant += 1,
            other => return Err(format!("a={a:?} k={k} N={iterate}: {other:?}")),
        }
    }
    within(start.elapsed(), 2.0)?;
    Ok(format!("200 instances agree ({resonant} resonant draws skipped), {:.2} s", start.elapsed().as_secs_f64()))
}

fn criterion_7() -> Outcome {
    for n in 1..=10 {
        let base = catalog("cp", n).map_err(|e| e.to_string())?;
        ensure(orbit_lower_bound(&base) == n as u64, || format!("cp {n}: {}", orbit_lower_bound(&base)))?;
    }
    let g2 = catalog("grassmannian", 2).map_err(|e| e.to_string())?;
    ensure(g2.morse_indices == [0, 2, 2, 4] && orbit_lower_bound(&g2) == 4, || format!("{g2:?}"))?;
    let g3 = catalog("grassmannian", 3).map_err(|e| e.to_string())?;
    ensure(g3.morse_indices == [0, 2, 4, 4, 6, 8], || format!("{g3:?}"))?;
    let base = catalog("cp", 3).map_err(|e| e.to_string())?;
    let ok = check_bundle_hypotheses(&base, &int(2), &int(3), true, true);
    ensure(ok.all_ok(), || format!("3/2 failed: {:?}", ok.failures))?;
    let bad = check_bundle_hypotheses(&base, &int(2), &int(4), true, true);
    ensure(!bad.all_ok() && !bad.pinching_ok, || "ratio 2 passed".into())?;
    Ok("cp bounds 1..10, G+(2,4) and G+(2,6) indices, pinching 3/2 passes and 2 fails".into())
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let window = DegreeWindow::new(-25, -10);
    for _ in 0..50 {
        let mu = rng.gen_range(10..=20);
        let k = rng.gen_range(1..=9);
        let ok = stabilization_check(mu, k, true, 5, 12, window).map_err(|e| e.to_string())?;
        ensure(ok, || format!("mu={mu} k={k} not stable on {window}"))?;
    }
    Ok(format!("50 good orbits stable on {window} between N=5 and N=12"))
}

fn cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_shplus"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), stdout))
}

fn criterion_9() -> Outcome {
    let runs: [&[&str]; 5] = [
        &["brieskorn", "--p", "7", "--m", "1", "--eps", "1/101", "--cutoff", "20", "--output", "json", "--with-spectrum"],
        &["ellipsoid", "--a", "1,1.01,1.02", "--cutoff", "6", "--output", "json"],
        &["distinguish", "--p1", "7", "--p2", "9", "--m", "1", "--eps", "1/101", "--cutoff", "30", "--max-shift", "40", "--output", "json"],
        &["certify-el", "--a", "1,1.01,1.02", "--r1sq", "1", "--r2sq", "1.69", "--output", "json"],
        &["bundle", "--catalog", "grassmannian", "--n", "3", "--r1sq", "1", "--r2sq", "1.5", "--min-period-ok", "--filling", "--cutoff", "3", "--output", "json"],
    ];
    for args in runs {
        let (code, first) = cli(args)?;
        let (_, second) = cli(args)?;
        ensure(code == 0, || format!("{args:?} exited {code}"))?;
        ensure(first == second, || format!("{args:?} is not deterministic"))?;
        let value: Value = serde_json::from_str(&first).map_err(|e| e.to_string())?;
        let mut again = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?;
        again.push('\n');
        ensure(again == first, || format!("{args:?} does not re-serialize byte-identically"))?;
    }
    // typed round trip of an invariant report
    let (_, text) = cli(runs[0])?;
    let value: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let parsed: InvariantReport =
        serde_json::from_value(value["report"]["invariant"].clone()).map_err(|e| e.to_string())?;
    let params = BrieskornParams::new(7, 1, vec![rat(1, 101)]).map_err(|e| e.to_string())?;
    let spectrum = brieskorn::enumerate_orbits(&params, &Action::pi(int(20))).map_err(|e| e.to_string())?;
    let direct = assemble_invariant(&spectrum, Convention::MinusCz).map_err(|e| e.to_string())?;
    ensure(parsed == direct, || "parsed report differs from the library value".into())?;
    Ok("5 commands byte-identical across runs; JSON re-parses losslessly".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1", "tower soundness", criterion_1),
        ("2", "Brieskorn parity and lacunarity", criterion_2),
        ("3", "index spot values", criterion_3),
        ("4", "Ustilovsky desk check (7, 9, ε=1/10, 30π)", criterion_4),
        ("4*", "Ustilovsky desk check, generic ε", criterion_4_generic),
        ("5", "Ekeland-Lasry desk check", criterion_5),
        ("6", "ellipsoid index oracle", criterion_6),
        ("7", "line-bundle counts", criterion_7),
        ("8", "stabilization", criterion_8),
        ("9", "determinism and round trip", criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        let known = UNATTAINABLE.contains(&id);
        match check() {
            Ok(detail) => {
                println!("criterion {id:<3} PASS  {name}: {detail}");
                if known {
                    unexpected.push(format!("{id} passed but is listed as unattainable"));
                }
            }
            Err(reason) => {
                let tag = if known { " [known unattainable]" } else { "" };
                println!("criterion {id:<3} FAIL  {name}: {reason}{tag}");
                if !known {
                    unexpected.push(id.to_string());
                }
            }
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected results: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
