use std::process::Command;

use davenport::cli::{parse_poly_expr, parse_sequence, run, EXIT_INCOMPLETE, EXIT_OK, EXIT_OUTSIDE, EXIT_USAGE};
use davenport::gfpoly::{Poly, Prime};
use davenport::semigroup::{build_cyclic_with_zero, build_product, build_quotient_semigroup, Elem};
use davenport::zerosum::Sequence;
use proptest::prelude::*;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("davenport").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn printed_polynomials_parse_back() {
    for p in [2u64, 3, 5, 7, 11] {
        let q = Prime::new(p).unwrap();
        for index in 0..(p.pow(3) as usize).min(400) {
            let f = Poly::from_index(q, index);
            assert_eq!(parse_poly_expr(&f.to_string(), q).unwrap(), f, "{f}");
        }
    }
}

proptest! {
    #[test]
    fn printed_polynomials_parse_back_random(p in prop::sample::select(vec![3u64, 5, 7, 13]), raw in prop::collection::vec(-50i64..50, 0..9)) {
        let q = Prime::new(p).unwrap();
        let f = Poly::new(q, &raw);
        prop_assert_eq!(parse_poly_expr(&f.to_string(), q).unwrap(), f);
    }

    #[test]
    fn displayed_sequences_parse_back(raw in prop::collection::vec(0..15u32, 0..12)) {
        let s = build_product(vec![build_cyclic_with_zero(2).unwrap(), build_cyclic_with_zero(4).unwrap()]).unwrap();
        let t = Sequence::from_elems(raw.iter().map(|&r| Elem(r)));
        prop_assert_eq!(parse_sequence(&s, &t.display(&s).to_string()).unwrap(), t.clone());
        let q = build_quotient_semigroup(&Poly::new(Prime::new(5).unwrap(), &[1, 2, 1])).unwrap();
        let t = Sequence::from_elems(raw.iter().map(|&r| Elem(r * 7 % 25)));
        prop_assert_eq!(parse_sequence(&q, &t.display(&q).to_string()).unwrap(), t);
    }
}

#[test]
fn record_output_is_reproducible() {
    let runs = [
        &["verify", "lemma", "--n-list", "2,3", "--format", "record", "--seed", "11"][..],
        &["verify", "proposition", "-p", "3", "--format", "record", "--stress", "300"],
        &["probe", "-p", "3", "-f", "x^2", "-f", "x^2(x+1)", "--format", "record", "--jobs", "2"],
        &["davenport", "--cyclic-zero", "2,4", "--format", "record"],
        &["davenport-group", "3,3", "--format", "record"],
    ];
    for args in runs {
        let first = invoke(args);
        let second = invoke(args);
        assert_eq!(first.0, EXIT_OK, "{args:?}: {}", first.2);
        assert_eq!(first, second, "{args:?}");
        assert!(!first.1.contains("millis"));
        for line in first.1.lines() {
            assert!(line.starts_with('{') && line.ends_with('}'), "{line}");
        }
    }
}

#[test]
fn jobs_are_reported_in_submission_order() {
    let (code, out, _) =
        invoke(&["probe", "-p", "3", "-f", "x^2(x+1)", "-f", "x^2", "--format", "record", "--jobs", "2"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains(r#""f":"x^3 + x^2""#), "{}", lines[0]);
    assert!(lines[1].contains(r#""f":"x^2""#), "{}", lines[1]);
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["verify", "theorem1", "-p", "3", "-f", "x*(x+1)"]).0, EXIT_OK);
    assert_eq!(invoke(&["verify", "theorem1", "-p", "2", "-f", "x*(x+1)"]).0, EXIT_OUTSIDE);
    let (code, _, err) = invoke(&["verify", "theorem1", "-p", "3", "-f", "(x+1)^2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("probe"));
    assert_eq!(invoke(&["davenport", "--group", "4,4", "--budget-ms", "0"]).0, EXIT_INCOMPLETE);
    assert_eq!(
        invoke(&["verify", "lemma", "--n-list", "4,4", "--budget-ms", "0", "--stress", "10"]).0,
        EXIT_INCOMPLETE
    );
    assert_eq!(invoke(&["davenport", "-f", "x"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["davenport", "-p", "3"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["reduce", "--group", "3", "--seq", "g; g; g", "--constructive"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["units", "--group", "2", "--unknown-flag"]).0, EXIT_USAGE);
}

#[test]
fn reduce_verb() {
    let (code, out, _) = invoke(&["reduce", "--cyclic-zero", "2", "--seq", "inf; g*2", "--constructive"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("reducible: yes"));
    assert!(out.contains("constructive (with_zeros): T' = (inf)"), "{out}");
    let (_, out, _) = invoke(&["reduce", "--group", "5", "--seq", "g*4"]);
    assert!(out.contains("reducible: no"));
}

#[test]
fn factor_and_units_verbs() {
    let (code, out, _) = invoke(&["factor", "-p", "3", "-f", "x^3+2x"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "x^3 + 2*x = x*(x + 1)*(x + 2)\nsquarefree: yes\n");
    let (_, out, _) = invoke(&["factor", "-p", "3", "-f", "coeffs:1,2,1", "--format", "record"]);
    assert_eq!(out, "{\"f\":\"x^2 + 2*x + 1\",\"unit\":1,\"factors\":[[\"x + 1\",2]],\"squarefree\":false}\n");
    let (_, out, _) = invoke(&["units", "-p", "3", "-f", "(x+1)^2", "--format", "record", "--dump"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], r#"{"kind":"quotient","p":3,"f":"x^2 + 2*x + 1","size":9,"identity":1,"zero":0}"#);
    assert!(lines[1].contains(r#""order":6,"invariant_factors":[6]"#), "{}", lines[1]);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_davenport");
    let status = Command::new(bin).args(["davenport-group", "2,6"]).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&status.stdout).starts_with("D(C_2 x C_6) = 7"));
    let status = Command::new(bin).args(["verify", "theorem1", "-p", "3", "-f", "(x+1)^2"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&status.stderr).contains("hypothesis"));
}
