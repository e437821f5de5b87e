//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use davenport::gfpoly::{factor, Poly};
use davenport::semigroup::{build_abelian_group, build_quotient_semigroup, crt_decompose, Elem};
use davenport::verify::{
    build_witness_v, conjecture_probe, square_of_x_plus_one, verify_lemma_product, verify_proposition, verify_theorem1,
    Claim, Status, VerificationReport, VerifyConfig,
};
use davenport::zerosum::{davenport_exact, davenport_montecarlo_upper, is_reducible, Method, Sequence};

mod common;
use common::{brute_reducible, multisets, prime, small_semigroups};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ensure_time(label: &str, start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{label} took {took:.2?}, limit {limit:?}"))
}

fn config(budget: Duration) -> VerifyConfig {
    VerifyConfig { budget: Some(budget), stress: 1000, samples: 10_000, seed: 0 }
}

fn exact_and_equal(r: &VerificationReport, expected: Option<u64>) -> Result<(), String> {
    let label = || format!("{} {:?}", r.claim, r.params);
    ensure(r.status == Status::Verified, || format!("{}: status {}\n{r}", label(), r.status))?;
    ensure(r.lhs.method == Method::ExactDfs && r.rhs.method == Method::ExactDfs, || format!("{}: not exact", label()))?;
    ensure(r.lhs.value == r.rhs.value, || format!("{}: {} != {}", label(), r.lhs.value, r.rhs.value))?;
    if let Some(v) = expected {
        ensure(r.lhs.value == v, || format!("{}: expected {v}, got {}", label(), r.lhs.value))?;
    }
    Ok(())
}

fn classical_oracle() -> Outcome {
    let start = Instant::now();
    for n in 2..=12u64 {
        let r = davenport_exact(&build_abelian_group(&[n]).unwrap(), None).map_err(|e| e.to_string())?;
        ensure(r.complete && r.value == n, || format!("D(C_{n}) = {} (complete {})", r.value, r.complete))?;
    }
    for (m, n) in [(2u64, 2u64), (2, 4), (3, 3), (2, 6), (3, 6)] {
        let r = davenport_exact(&build_abelian_group(&[m, n]).unwrap(), None).map_err(|e| e.to_string())?;
        ensure(r.complete && r.value == m + n - 1, || format!("D(C_{m} x C_{n}) = {}", r.value))?;
    }
    ensure_time("total", start, Duration::from_secs(60))?;
    Ok(format!("11 cyclic + 5 rank-two groups exact in {:.2?}", start.elapsed()))
}

/// Non-decreasing lists of orders `>= 2`, at most three entries, product at most 16.
fn lemma_lists() -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for a in 2..=16u64 {
        out.push(vec![a]);
        for b in a..=16 / a {
            out.push(vec![a, b]);
            for c in b..=16 / (a * b) {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

fn lemma_desk_scale(reports: &mut Vec<VerificationReport>) -> Outcome {
    let start = Instant::now();
    let lists = lemma_lists();
    for ns in &lists {
        let r = verify_lemma_product(ns, &config(Duration::from_secs(60))).map_err(|e| format!("{ns:?}: {e}"))?;
        exact_and_equal(&r, None)?;
        let stress = r.checks.iter().find(|c| c.name == "constructive_reduction");
        ensure(stress.is_some_and(|c| c.passed && c.detail.starts_with("1000 ")), || {
            format!("{ns:?}: constructive reduction {stress:?}")
        })?;
        reports.push(r);
    }
    Ok(format!("{} n-lists, 1000 reductions each, {:.2?}", lists.len(), start.elapsed()))
}

fn theorem1_desk_scale(reports: &mut Vec<VerificationReport>) -> Outcome {
    let cases: [(u64, &[i64], u64); 7] = [
        (3, &[0, 1], 2),
        (3, &[1, 1], 2),
        (3, &[0, 1, 1], 3),
        (3, &[0, 2, 0, 1], 4),
        (3, &[1, 0, 1], 8),
        (5, &[0, 1], 4),
        (5, &[0, 1, 1], 7),
    ];
    let mut slowest = Duration::ZERO;
    for (p, coeffs, expected) in cases {
        let f = Poly::new(prime(p), coeffs);
        let start = Instant::now();
        let r = verify_theorem1(&f, &config(Duration::from_secs(120))).map_err(|e| format!("p={p} f={f}: {e}"))?;
        ensure_time(&format!("p={p} f={f}"), start, Duration::from_secs(120))?;
        slowest = slowest.max(start.elapsed());
        exact_and_equal(&r, Some(expected))?;
        reports.push(r);
    }
    Ok(format!("{} moduli verified, slowest {slowest:.2?}", cases.len()))
}

fn proposition_p3(reports: &mut Vec<VerificationReport>) -> Outcome {
    let start = Instant::now();
    let r = verify_proposition(prime(3), &config(Duration::from_secs(60))).map_err(|e| e.to_string())?;
    ensure_time("p=3", start, Duration::from_secs(60))?;
    exact_and_equal(&r, Some(6))?;
    let stress = r.checks.iter().find(|c| c.name == "quadratic_reduction");
    ensure(stress.is_some_and(|c| c.passed), || format!("{stress:?}"))?;
    let detail = stress.map(|c| c.detail.clone()).unwrap_or_default();
    reports.push(r);
    Ok(format!("D = 6 both sides; {detail}; {:.2?}", start.elapsed()))
}

fn proposition_p5(reports: &mut Vec<VerificationReport>) -> Outcome {
    let start = Instant::now();
    let p = prime(5);
    let s = build_quotient_semigroup(&square_of_x_plus_one(p)).map_err(|e| e.to_string())?;
    // x + 3 generates the unit group of order 20
    let u = s.index_of(&davenport::semigroup::SgElement::Residue(Poly::new(p, &[3, 1]))).unwrap();
    let lower = Sequence::from_elems(std::iter::repeat_n(u, 19));
    ensure(!is_reducible(&s, &lower).unwrap(), || "(x + 3)^19 is reducible".into())?;

    let mut cfg = config(Duration::from_secs(600));
    cfg.samples = 100_000;
    let r = verify_proposition(p, &cfg).map_err(|e| e.to_string())?;
    ensure(r.lhs.value >= 20 && r.rhs.value == 20, || format!("values {} / {}", r.lhs.value, r.rhs.value))?;
    let upper = if r.lhs.complete {
        exact_and_equal(&r, Some(20))?;
        format!("exact search D(S) = 20 ({} nodes)", r.lhs.nodes)
    } else {
        let mc = r.montecarlo.as_ref().ok_or("search incomplete and no sampling report")?;
        ensure(mc.samples == 100_000 && mc.reducible == mc.samples, || format!("sampling {mc:?}"))?;
        format!("search incomplete; {} / {} samples reducible", mc.reducible, mc.samples)
    };
    // independent sampling evidence at the threshold length
    let mc = davenport_montecarlo_upper(&s, 20, 100_000, 0).map_err(|e| e.to_string())?;
    ensure(mc.all_reducible(), || format!("irreducible length-20 sample {:?}", mc.counterexample))?;
    reports.push(r);
    Ok(format!(
        "lower bound (x + 3)^19; {upper}; {} / {} random length-20 sequences reducible; {:.2?}",
        mc.reducible,
        mc.samples,
        start.elapsed()
    ))
}

fn witness_family() -> Outcome {
    for p in [3u64, 5, 7, 11] {
        let (s, v) = build_witness_v(prime(p)).map_err(|e| format!("p={p}: {e}"))?;
        ensure(v.len() == p as usize - 1 && !is_reducible(&s, &v).unwrap(), || format!("p={p}: {}", v.display(&s)))?;
    }
    Ok("V = x·g^(p-2) irreducible for p = 3, 5, 7, 11".into())
}

fn property_suite(reports: &[VerificationReport]) -> Outcome {
    let mut checked = 0usize;
    for (name, s) in small_semigroups() {
        for len in 0..=4 {
            for t in multisets(s.size() as u32, len) {
                let dp = is_reducible(&s, &t).unwrap();
                ensure(dp == brute_reducible(&s, &t), || format!("{name}: DP disagrees on {}", t.display(&s)))?;
                if dp && len < 4 {
                    for x in s.elements() {
                        let mut longer = t.clone();
                        longer.push(x);
                        ensure(is_reducible(&s, &longer).unwrap(), || {
                            format!("{name}: heredity fails at {}", t.display(&s))
                        })?;
                    }
                }
                checked += 1;
            }
        }
    }
    for r in reports {
        let bound = r.checks.iter().find(|c| c.name == "units_bound");
        ensure(bound.is_some_and(|c| c.passed), || format!("{} {:?}: D(U) <= D(S) fails", r.claim, r.params))?;
        if r.claim == Claim::LemmaProduct {
            let chain = r.checks.iter().find(|c| c.name == "rank_chain");
            ensure(chain.is_some_and(|c| c.passed), || format!("{:?}: D(U) >= k + 1 fails", r.params))?;
        }
    }
    for (p, coeffs) in [(3u64, &[0i64, 2, 0, 1][..]), (5, &[0, 1, 1]), (3, &[0, 1, 1])] {
        let f = Poly::new(prime(p), coeffs);
        let s = build_quotient_semigroup(&f).unwrap();
        let crt = crt_decompose(&f).unwrap();
        let image: BTreeSet<Elem> = crt.image().iter().copied().collect();
        ensure(image.len() == s.size(), || format!("{f}: CRT map not injective"))?;
        for a in s.elements() {
            for b in s.elements() {
                ensure(crt.iso(s.op(a, b)) == crt.product.op(crt.iso(a), crt.iso(b)), || {
                    format!("{f}: CRT not multiplicative")
                })?;
            }
        }
    }
    let mut round_trips = 0;
    for p in [2u64, 3, 5, 7] {
        let q = prime(p);
        for d in 1..=4 {
            for f in Poly::monic_of_degree(q, d).take(300) {
                ensure(factor(&f).unwrap().expand(q) == f, || {
                    format!("{f} over F_{p}: factorization does not expand back")
                })?;
                round_trips += 1;
            }
        }
    }
    Ok(format!(
        "{checked} sequences (DP vs enumeration, heredity), {} reports (D(U) <= D(S), D(U) >= k + 1), 3 CRT maps, {round_trips} factorizations",
        reports.len()
    ))
}

fn conjecture_probes(reports: &mut Vec<VerificationReport>) -> Outcome {
    let mut parts = Vec::new();
    for coeffs in [&[0i64, 0, 1][..], &[0, 0, 1, 1], &[1, 0, 0, 1]] {
        let f = Poly::new(prime(3), coeffs);
        let start = Instant::now();
        let r = conjecture_probe(&f, &config(Duration::from_secs(600))).map_err(|e| format!("{f}: {e}"))?;
        ensure_time(&f.to_string(), start, Duration::from_secs(600))?;
        ensure(r.status == Status::Evidence && r.lhs.complete && r.rhs.complete, || {
            format!("{f}: status {}\n{r}", r.status)
        })?;
        parts.push(format!("{} -> {}", factor(&f).unwrap(), r.lhs.value));
        reports.push(r);
    }
    Ok(format!("evidence: {}", parts.join(", ")))
}

fn main() -> ExitCode {
    let mut reports = Vec::new();
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "classical oracle D(C_n), D(C_m x C_n)", classical_oracle()),
        (2, "product of groups with zeros, prod n <= 16, k <= 3", lemma_desk_scale(&mut reports)),
        (3, "squarefree moduli, p = 3 and p = 5", theorem1_desk_scale(&mut reports)),
        (4, "(x+1)^2 at p = 3", proposition_p3(&mut reports)),
        (5, "(x+1)^2 at p = 5", proposition_p5(&mut reports)),
        (6, "witness family V", witness_family()),
    ];
    let probes = conjecture_probes(&mut reports);
    results.push((7, "property suite", property_suite(&reports)));
    results.push((8, "conjecture probes at p = 3", probes));

    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS [{id}] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL [{id}] {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
