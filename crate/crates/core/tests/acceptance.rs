//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero on any failure other than the documented one.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use quadclass::classgroup::{group_structure, ClassGroupConfig};
use quadclass::family::{
    build_field_spec, check_hypotheses, family_members, genus_consistent, verify_field, FieldReport,
    OrderKind, DEFAULT_SEARCH_BOUND,
};
use quadclass::wada::{classify, table2_fixtures, table2_report, SylowColumns, VerdictKind};
use quadclass::{Discriminant, QForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn cfg() -> ClassGroupConfig {
    ClassGroupConfig::default()
}

fn row_one() -> Outcome {
    let start = Instant::now();
    let spec = build_field_spec(11, 17, 5).unwrap();
    let row = table2_report(&spec, OrderKind::Radicand, &cfg()).unwrap();
    let elapsed = start.elapsed();
    let c = &row.columns;
    let pass = row.structure == [20, 10, 2, 2]
        && c.two_parts == [2, 2, 2, 4]
        && c.five_parts == [5, 5]
        && c.three_parts.is_empty()
        && c.remaining.is_empty()
        && row.verdict.kind == VerdictKind::ConformingType
        && elapsed < Duration::from_secs(60);
    outcome(pass, format!("{row} ({})", secs(elapsed)))
}

/// Members of the sweep: distinct odd primes up to 19, n in {3, 5, 7},
/// |disc| <= 1e9.
fn sweep() -> (Vec<FieldReport>, Duration) {
    let start = Instant::now();
    let limit = BigUint::from(1_000_000_000u32);
    let reports = family_members(19, 19, &[3, 5, 7])
        .unwrap()
        .into_iter()
        .filter(|s| s.delta.abs() <= limit)
        .map(|s| verify_field(&s, &cfg(), DEFAULT_SEARCH_BOUND))
        .collect();
    (reports, start.elapsed())
}

fn theorem_sweep(reports: &[FieldReport], elapsed: Duration) -> (Outcome, String) {
    let passing: Vec<_> = reports.iter().filter(|r| r.hypotheses.all_ok).collect();
    let failures: Vec<_> = passing
        .iter()
        .filter(|r| r.theorem_holds() != Some(true))
        .map(|r| r.spec.label())
        .collect();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(600);
    let exceptions: Vec<_> = reports
        .iter()
        .filter(|r| r.field_exception())
        .map(|r| {
            let m = r.maximal.as_ref().unwrap();
            format!("{} (h = {} in disc {})", r.spec.label(), m.h(), r.spec.delta)
        })
        .collect();
    let note = format!(
        "maximal order: {} hypothesis-passing fields without a class of order n: {}",
        exceptions.len(),
        exceptions.join(", ")
    );
    (
        outcome(
            pass,
            format!(
                "{} fields, {} pass the hypotheses, {} exceptions in Z[sqrt(d)] {:?} ({})",
                reports.len(),
                passing.len(),
                failures.len(),
                failures,
                secs(elapsed)
            ),
        ),
        note,
    )
}

fn exempt_case() -> Outcome {
    let hyp = check_hypotheses(19, 7, 3).unwrap();
    let spec = build_field_spec(19, 7, 3).unwrap();
    let report = verify_field(&spec, &cfg(), DEFAULT_SEARCH_BOUND);
    let h = report.radicand.as_ref().map(|c| c.h()).unwrap_or(0);
    let pass = hyp.size_ok && hyp.nonsquare_ok && !hyp.cube_ok && h == 12 && h % 3 == 0;
    outcome(pass, format!("cube condition holds: {}, h = {h}, 3 | h: {}", hyp.cube_ok, h % 3 == 0))
}

fn cross_validation() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for m in 3..=100_000i64 {
        let disc = -m;
        if !common::is_fundamental(disc) {
            continue;
        }
        checked += 1;
        let forms = common::reduced_forms(disc);
        let g = group_structure(&Discriminant::from_i64(disc).unwrap(), &cfg()).unwrap();
        let product: u64 = g.invariant_factors.iter().product();
        if product != forms.len() as u64 || g.invariant_factors != common::invariants_from_elements(&forms) {
            bad.push(disc);
        }
    }
    let h = |d: i64| group_structure(&Discriminant::from_i64(d).unwrap(), &cfg()).unwrap().h;
    let spots = (h(-3), h(-4), h(-23));
    outcome(
        bad.is_empty() && spots == (1, 1, 3),
        format!(
            "{checked} fundamental discriminants, {} mismatches {:?}; h(-3), h(-4), h(-23) = {spots:?} ({})",
            bad.len(),
            &bad[..bad.len().min(5)],
            secs(start.elapsed())
        ),
    )
}

/// Fails as documented: the printed vector [479550, 30, 3] has three
/// factors with an odd part, so it is classified as a counterexample too.
fn fixtures() -> (Outcome, bool) {
    let fixtures = table2_fixtures();
    let mut counterexamples = Vec::new();
    let mut others_conform = true;
    let mut reassembles = true;
    for f in &fixtures {
        let verdict = classify(&f.structure).unwrap();
        match verdict.kind {
            VerdictKind::Counterexample => counterexamples.push(f.structure.clone()),
            VerdictKind::ConformingType => {}
            VerdictKind::Cyclic => others_conform = false,
        }
        reassembles &= SylowColumns::of(&f.structure).reassemble().unwrap() == f.structure;
    }
    let starred = fixtures
        .iter()
        .find(|f| f.starred())
        .map(|f| f.structure.clone())
        .unwrap_or_default();
    let pass = fixtures.len() == 14
        && counterexamples == [starred.clone()]
        && others_conform
        && reassembles;
    let documented = fixtures.len() == 14
        && counterexamples == [vec![479550, 30, 3], starred.clone()]
        && starred == [381006210618, 6, 6, 2, 2, 2]
        && others_conform
        && reassembles;
    let detail = format!(
        "{} vectors, counterexamples {:?}, ** row {:?}, columns reassemble: {reassembles}",
        fixtures.len(),
        counterexamples,
        starred
    );
    let detail = if !pass && documented {
        format!("{detail}; the unmarked row [479550, 30, 3] also has three odd-carrying factors")
    } else {
        detail
    };
    (outcome(pass, detail), documented)
}

fn genus(reports: &[FieldReport]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for r in reports {
        for (kind, check) in r.checks() {
            if let Ok(c) = check {
                checked += 1;
                if !genus_consistent(c) {
                    bad.push((r.spec.label(), kind));
                }
            }
        }
    }
    let missing = reports.len() * 2 - checked;
    outcome(
        bad.is_empty() && missing == 0,
        format!("{checked} class groups (both orders), {} mismatches {bad:?}, {missing} not computed", bad.len()),
    )
}

fn oracle(reports: &[FieldReport]) -> Outcome {
    let with_three: Vec<_> = reports.iter().filter(|r| r.spec.n % 3 == 0).collect();
    let mut searched = 0;
    let mut candidates = 0;
    let mut errors = 0;
    for r in with_three.iter().filter(|r| r.hypotheses.all_ok) {
        for (ell, result) in &r.oracle {
            if *ell == 3 {
                match result {
                    Ok(o) => {
                        searched += 1;
                        candidates += o.candidate_count();
                    }
                    Err(_) => errors += 1,
                }
            }
        }
    }
    let exempt: usize = with_three
        .iter()
        .filter(|r| !r.hypotheses.all_ok)
        .map(|r| r.oracle_candidates())
        .sum();
    outcome(
        candidates == 0 && errors == 0 && searched > 0,
        format!(
            "{searched} hypothesis-passing fields with 3 | n searched, {candidates} candidates, {errors} incomplete; \
             {exempt} candidates in fields failing the cube condition"
        ),
    )
}

fn random_form(rng: &mut ChaCha8Rng, disc: i128) -> QForm<i128> {
    let mut f = QForm::principal(&disc);
    for _ in 0..3 {
        let ell = loop {
            let ell = rng.gen_range(2..2000u64);
            if let Ok(g) = QForm::prime_form(&disc, ell) {
                break g;
            }
        };
        f = f.compose(&ell.pow_u64(rng.gen_range(1..50))).unwrap();
    }
    f
}

fn properties() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut triples = 0u64;
    for m in 3..=2000i64 {
        let disc = -m;
        if !matches!(disc.rem_euclid(4), 0 | 1) {
            continue;
        }
        let forms = common::reduced_forms(disc);
        let e = QForm::principal(&(disc as i128));
        for x in &forms {
            let ok = x.compose(&e).unwrap() == *x
                && x.compose(&x.inverse()).unwrap().is_principal()
                && x.reduce() == *x
                && x.reduce().reduce() == x.reduce();
            if !ok {
                failures.push(format!("identity/inverse/reduce at {x}"));
            }
            for y in &forms {
                let xy = x.compose(y).unwrap();
                if xy != y.compose(x).unwrap() {
                    failures.push(format!("commutativity at {x}, {y}"));
                }
                for z in &forms {
                    triples += 1;
                    if xy.compose(z).unwrap() != x.compose(&y.compose(z).unwrap()).unwrap() {
                        failures.push(format!("associativity at {x}, {y}, {z}"));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..10_000 {
        let disc = loop {
            let d = -(rng.gen_range(2001..1_000_000_000_000i128));
            if d.rem_euclid(4) <= 1 {
                break d;
            }
        };
        let (x, y, z) = (random_form(&mut rng, disc), random_form(&mut rng, disc), random_form(&mut rng, disc));
        let e = QForm::principal(&disc);
        let (a, b) = (rng.gen_range(0..1000u64), rng.gen_range(0..1000u64));
        let ok = x.compose(&y).unwrap().compose(&z).unwrap() == x.compose(&y.compose(&z).unwrap()).unwrap()
            && x.compose(&e).unwrap() == x
            && x.compose(&x.inverse()).unwrap().is_principal()
            && x.reduce().reduce() == x.reduce()
            && x.pow_u64(a).compose(&x.pow_u64(b)).unwrap() == x.pow_u64(a + b);
        if !ok {
            failures.push(format!("random triple at disc {disc}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{triples} exhaustive triples for |disc| <= 2000, 10000 random triples; {} failures {:?} ({})",
            failures.len(),
            &failures[..failures.len().min(3)],
            secs(start.elapsed())
        ),
    )
}

fn row(p: u64, q: u64, n: u32, expected: &[u64], limit: Duration) -> Outcome {
    let start = Instant::now();
    let spec = build_field_spec(p, q, n).unwrap();
    let g = group_structure(spec.discriminant(OrderKind::Radicand), &cfg());
    let elapsed = start.elapsed();
    match g {
        Ok(g) => outcome(
            g.invariant_factors == expected && g.h == expected.iter().product::<u64>() && elapsed < limit,
            format!("{}: h = {}, {:?} ({})", spec.label(), g.h, g.invariant_factors, secs(elapsed)),
        ),
        Err(e) => outcome(false, format!("{}: {e}", spec.label())),
    }
}

fn main() {
    let mut unexpected = 0;
    let report = |id: &str, name: &str, o: Outcome| {
        println!("[{}] {id} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        o.pass
    };

    let r1 = report("1", "table row 11^2-2*17^5", row_one());
    let (reports, elapsed) = sweep();
    let (c2, note) = theorem_sweep(&reports, elapsed);
    let r2 = report("2", "order-n sweep", c2);
    println!("       note: {note}");
    let r3 = report("3", "hypothesis-exempt (19, 7, 3)", exempt_case());
    let r4 = report("4", "structure vs reduced-form count, fundamental |disc| <= 1e5", cross_validation());
    let (c5, documented) = fixtures();
    let r5 = report("5", "Wada classifier on table fixtures", c5);
    let r6 = report("6", "genus 2-rank on sweep fields", genus(&reports));
    let r7 = report("7", "proposition oracle on sweep fields with 3 | n", oracle(&reports));
    let r8 = report("8", "group law property suite", properties());
    let r9 = report(
        "9",
        "row 7^2-2*17^13 by BSGS",
        row(7, 17, 13, &[1084512, 6, 2, 2, 2, 2], Duration::from_secs(1800)),
    );
    let extended = [
        row(13, 11, 15, &[479550, 30, 3], Duration::from_secs(1800)),
        row(13, 17, 15, &[10105440, 12, 2, 2, 2], Duration::from_secs(1800)),
        row(3, 5, 21, &[565992, 6, 2, 2, 2], Duration::from_secs(1800)),
        row(3, 13, 21, &[7991268432, 6, 2, 2, 2, 2], Duration::from_secs(1800)),
        row(17, 11, 21, &[286454952, 12, 2, 2, 2, 2], Duration::from_secs(1800)),
        row(11, 7, 25, &[292374800, 10, 2, 2, 2], Duration::from_secs(1800)),
    ];
    let mut r9x = true;
    for (i, o) in extended.into_iter().enumerate() {
        r9x &= report(&format!("9.{}", i + 3), "extended table row by BSGS", o);
    }

    for ok in [r1, r2, r3, r4, r6, r7, r8, r9, r9x] {
        unexpected += usize::from(!ok);
    }
    if !r5 {
        if documented {
            println!("       criterion 5 fails only in the documented way (see README, Known deviations)");
        } else {
            unexpected += 1;
        }
    }
    let distinct: BTreeSet<u32> = reports.iter().map(|r| r.spec.n).collect();
    println!("summary: {} sweep fields over n in {distinct:?}; unexpected failures: {unexpected}", reports.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
