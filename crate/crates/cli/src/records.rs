//! JSON records for each command.

use std::fmt::Display;
use std::str::FromStr;

use quadclass::classgroup::{genus_two_rank, group_structure, ClassGroupConfig, ClassGroupStructure};
use quadclass::family::{FieldReport, FieldSpec, ObstructionReport, OrderCheck, OrderKind};
use quadclass::intcore::{factor, is_prime, squarefree_decompose};
use quadclass::wada::{check_fixture, classify, SylowColumns, Table2Fixture};
use quadclass::{Discriminant, Error};
use num_bigint::BigUint;
use serde_json::{json, Map, Number, Value};

/// Integer of any size as a JSON number.
pub fn num(x: impl Display) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integer literal"))
}

fn field_prefix(spec: &FieldSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("p".into(), json!(spec.p));
    m.insert("q".into(), json!(spec.q));
    m.insert("n".into(), json!(spec.n));
    m.insert("d".into(), num(&spec.d));
    m.insert("s".into(), num(&spec.s));
    m.insert("D".into(), num(&spec.squarefree));
    m
}

fn structure_fields(m: &mut Map<String, Value>, g: &ClassGroupStructure) {
    let columns = SylowColumns::of(&g.invariant_factors);
    let verdict = classify(&g.invariant_factors).expect("computed structures are chains");
    let genus = genus_two_rank(&g.discriminant);
    m.insert("h".into(), json!(g.h));
    m.insert("structure".into(), json!(g.invariant_factors));
    m.insert(
        "generators".into(),
        json!(g.generators.iter().map(|f| f.to_string()).collect::<Vec<_>>()),
    );
    m.insert("two_rank".into(), json!(g.even_factor_count()));
    m.insert("ramified_primes".into(), json!(genus.ramified_prime_count));
    m.insert("two_parts".into(), json!(columns.two_parts));
    m.insert("three_parts".into(), json!(columns.three_parts));
    m.insert("five_parts".into(), json!(columns.five_parts));
    m.insert("remaining".into(), json!(columns.remaining));
    m.insert("wada".into(), json!(verdict.kind.to_string()));
    m.insert("odd_heavy_count".into(), json!(verdict.odd_heavy_count));
}

/// Structure record for one discriminant, optionally tagged with its field.
pub fn classgroup_record(
    disc: &Discriminant,
    field: Option<(&FieldSpec, OrderKind)>,
    cfg: &ClassGroupConfig,
) -> (Value, Option<Error>) {
    let mut m = Map::new();
    if let Some((spec, kind)) = field {
        m = field_prefix(spec);
        m.insert("order".into(), json!(order_name(kind)));
    }
    m.insert("disc".into(), num(disc.value()));
    m.insert("fundamental".into(), json!(disc.is_fundamental()));
    let result = group_structure(disc, cfg);
    match &result {
        Ok(g) => {
            structure_fields(&mut m, g);
            m.insert("error".into(), Value::Null);
        }
        Err(e) => {
            m.insert("error".into(), json!(e.to_string()));
        }
    }
    (Value::Object(m), result.err())
}

pub fn order_name(kind: OrderKind) -> &'static str {
    match kind {
        OrderKind::Maximal => "field",
        OrderKind::Radicand => "radicand",
    }
}

fn oracle_summary(ell: u64, r: &Result<ObstructionReport, Error>) -> Value {
    match r {
        Ok(ObstructionReport::NormObstruction) => json!({"ell": ell, "method": "norm"}),
        Ok(ObstructionReport::Searched { norm_solutions, candidates }) => json!({
            "ell": ell,
            "method": "search",
            "norm_solutions": norm_solutions,
            "candidates": candidates.len(),
        }),
        Err(e) => json!({"ell": ell, "method": "skipped", "error": e.to_string()}),
    }
}

/// Verification record. `h`, `structure` and `order_A` refer to
/// `Z[sqrt(d)]` (`disc_order`); the `_field` entries to the maximal order
/// (`disc`).
pub fn verify_record(report: &FieldReport) -> Value {
    let spec = &report.spec;
    let n = spec.n as u64;
    let hyp = &report.hypotheses;
    let mut m = field_prefix(spec);
    m.insert("disc".into(), num(spec.delta.value()));
    m.insert("hyp_size".into(), json!(hyp.size_ok));
    m.insert("hyp_nonsquare".into(), json!(hyp.nonsquare_ok));
    m.insert("hyp_cube".into(), json!(hyp.cube_ok));

    let facts = |c: &Result<OrderCheck, Error>| match c {
        Ok(c) => (
            json!(c.h()),
            json!(c.structure.invariant_factors),
            json!(c.order),
            json!(c.order == n),
            json!(c.h() % n == 0),
            json!(classify(&c.structure.invariant_factors).unwrap().kind.to_string()),
        ),
        Err(_) => (Value::Null, Value::Null, Value::Null, Value::Null, Value::Null, Value::Null),
    };
    let (h, structure, order, matches, divides, wada) = facts(&report.radicand);
    m.insert("h".into(), h);
    m.insert("structure".into(), structure);
    m.insert("order_A".into(), order);
    m.insert("matches".into(), matches);
    m.insert("divides".into(), divides);
    m.insert("wada".into(), wada);
    let error = report
        .checks()
        .iter()
        .find_map(|(_, c)| c.as_ref().err())
        .map(|e| e.to_string());
    m.insert("error".into(), json!(error));

    m.insert("status".into(), json!(report.status().as_str()));
    m.insert("disc_order".into(), num(spec.radicand_delta.value()));
    let (h, structure, order, matches, divides, wada) = facts(&report.maximal);
    m.insert("h_field".into(), h);
    m.insert("structure_field".into(), structure);
    m.insert("order_A_field".into(), order);
    m.insert("matches_field".into(), matches);
    m.insert("divides_field".into(), divides);
    m.insert("wada_field".into(), wada);
    m.insert("field_exception".into(), json!(report.field_exception()));
    m.insert("genus".into(), json!(report.genus_holds()));
    m.insert(
        "oracle".into(),
        Value::Array(report.oracle.iter().map(|(ell, r)| oracle_summary(*ell, r)).collect()),
    );
    Value::Object(m)
}

pub fn fixture_record(fixture: &Table2Fixture) -> Result<Value, Error> {
    let check = check_fixture(fixture)?;
    let c = &check.row.columns;
    Ok(json!({
        "expr": fixture.expr,
        "structure": check.row.structure,
        "two_parts": c.two_parts,
        "three_parts": c.three_parts,
        "five_parts": c.five_parts,
        "remaining": c.remaining,
        "wada": check.row.verdict.kind.to_string(),
        "odd_heavy_count": check.row.verdict.odd_heavy_count,
        "mark": fixture.mark,
        "mark_agrees": check.mark_agrees,
        "reassembles": check.reassembles,
        "column_mismatches": check.column_mismatches,
    }))
}

pub fn factor_record(n: &BigUint) -> Value {
    let f = factor(n);
    let (s, d) = squarefree_decompose(n);
    let factors: Vec<Value> = f.factors().iter().map(|(p, e)| json!([num(p), e])).collect();
    json!({
        "value": num(n),
        "prime": is_prime(n),
        "factors": factors,
        "square_part": num(s),
        "squarefree_part": num(d),
    })
}
