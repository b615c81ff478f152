//! Class group structures against Wada's conjecture: every imaginary
//! quadratic class group is cyclic or of type `(h1, h2, 2^r1, ..., 2^rk)`.
//!
//! A chain conforms when at most two invariant factors have an odd part
//! greater than 1.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classgroup::{group_structure, ClassGroupConfig};
pub use crate::classgroup::{primes_of, sylow_parts};
use crate::error::{Error, Result};
use crate::family::{FieldSpec, OrderKind};
use crate::intcore::factor_u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictKind {
    Cyclic,
    ConformingType,
    Counterexample,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Cyclic => "Cyclic",
            VerdictKind::ConformingType => "ConformingType",
            VerdictKind::Counterexample => "Counterexample",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WadaVerdict {
    pub kind: VerdictKind,
    /// Invariant factors whose odd part exceeds 1.
    pub odd_heavy_count: usize,
}

fn odd_part(mut h: u64) -> u64 {
    while h % 2 == 0 {
        h /= 2;
    }
    h
}

/// Drop factors equal to 1 and check the divisibility chain.
pub fn normalize_chain(factors: &[u64]) -> Result<Vec<u64>> {
    if factors.contains(&0) {
        return Err(Error::domain("invariant factors must be positive"));
    }
    let chain: Vec<u64> = factors.iter().copied().filter(|&h| h > 1).collect();
    if let Some(w) = chain.windows(2).find(|w| w[0] % w[1] != 0) {
        return Err(Error::domain(format!(
            "{factors:?} is not a divisibility chain: {} does not divide {}",
            w[1], w[0]
        )));
    }
    Ok(chain)
}

pub fn classify(factors: &[u64]) -> Result<WadaVerdict> {
    let chain = normalize_chain(factors)?;
    let odd_heavy_count = chain.iter().filter(|&&h| odd_part(h) > 1).count();
    let kind = if chain.len() <= 1 {
        VerdictKind::Cyclic
    } else if odd_heavy_count <= 2 {
        // in a chain the odd-heavy factors come first
        assert!(chain[odd_heavy_count..].iter().all(|h| h.is_power_of_two()));
        VerdictKind::ConformingType
    } else {
        VerdictKind::Counterexample
    };
    Ok(WadaVerdict {
        kind,
        odd_heavy_count,
    })
}

/// Prime-power parts of a chain grouped as in the class group tables:
/// the 2-, 3- and 5-parts, then every other prime's parts together.
/// Each column is ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SylowColumns {
    pub two_parts: Vec<u64>,
    pub three_parts: Vec<u64>,
    pub five_parts: Vec<u64>,
    pub remaining: Vec<u64>,
}

impl SylowColumns {
    pub fn of(factors: &[u64]) -> Self {
        let mut remaining: Vec<u64> = primes_of(factors)
            .into_iter()
            .filter(|&p| p > 5)
            .flat_map(|p| sylow_parts(factors, p))
            .collect();
        remaining.sort_unstable();
        SylowColumns {
            two_parts: sylow_parts(factors, 2),
            three_parts: sylow_parts(factors, 3),
            five_parts: sylow_parts(factors, 5),
            remaining,
        }
    }

    /// Rebuild the descending chain: for each prime the largest part goes
    /// to the first factor, the next largest to the second, and so on.
    pub fn reassemble(&self) -> Result<Vec<u64>> {
        let mut by_prime: Vec<(u64, Vec<u64>)> = Vec::new();
        let columns = [&self.two_parts, &self.three_parts, &self.five_parts, &self.remaining];
        for (column, prime) in columns.into_iter().zip([Some(2), Some(3), Some(5), None]) {
            for &part in column {
                let f = factor_u64(part);
                let base = match f.as_slice() {
                    [(p, _)] if prime.is_none_or(|q| q == *p) && (prime.is_some() || *p > 5) => *p,
                    _ => {
                        return Err(Error::domain(format!(
                            "{part} does not belong in the column for {}",
                            prime.map_or("primes above 5".to_string(), |q| q.to_string())
                        )))
                    }
                };
                match by_prime.iter_mut().find(|(p, _)| *p == base) {
                    Some((_, parts)) => parts.push(part),
                    None => by_prime.push((base, vec![part])),
                }
            }
        }
        let len = by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut chain = vec![1u64; len];
        for (_, mut parts) in by_prime {
            parts.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, part) in chain.iter_mut().zip(parts) {
                *slot = slot
                    .checked_mul(part)
                    .ok_or_else(|| Error::domain("reassembled factor overflows u64"))?;
            }
        }
        Ok(chain)
    }

    fn column_names() -> [&'static str; 4] {
        ["2-parts", "3-parts", "5-parts", "remaining"]
    }

    fn columns(&self) -> [&Vec<u64>; 4] {
        [&self.two_parts, &self.three_parts, &self.five_parts, &self.remaining]
    }
}

/// `(2,2,2,4)`, or `--` for an empty column.
pub fn format_column(parts: &[u64]) -> String {
    if parts.is_empty() {
        return "--".to_string();
    }
    let inner: Vec<String> = parts.iter().map(u64::to_string).collect();
    format!("({})", inner.join(","))
}

/// `[20, 10, 2, 2]`
pub fn format_structure(factors: &[u64]) -> String {
    let inner: Vec<String> = factors.iter().map(u64::to_string).collect();
    format!("[{}]", inner.join(", "))
}

/// One line of a class group structure table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table2Row {
    pub label: String,
    pub structure: Vec<u64>,
    pub columns: SylowColumns,
    pub verdict: WadaVerdict,
}

impl Table2Row {
    pub fn from_structure(label: impl Into<String>, factors: &[u64]) -> Result<Self> {
        let structure = normalize_chain(factors)?;
        Ok(Table2Row {
            label: label.into(),
            columns: SylowColumns::of(&structure),
            verdict: classify(&structure)?,
            structure,
        })
    }
}

impl fmt::Display for Table2Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.verdict.kind == VerdictKind::Counterexample { "**" } else { "" };
        write!(
            f,
            "{} & {}{} & {} & {} & {} & {}",
            self.label,
            format_structure(&self.structure),
            mark,
            format_column(&self.columns.two_parts),
            format_column(&self.columns.three_parts),
            format_column(&self.columns.five_parts),
            format_column(&self.columns.remaining),
        )
    }
}

/// Compute the class group of `Z[sqrt(p^2 - 2q^n)]` (or the maximal order)
/// and lay it out as a table row.
pub fn table2_report(spec: &FieldSpec, kind: OrderKind, cfg: &ClassGroupConfig) -> Result<Table2Row> {
    let structure = group_structure(spec.discriminant(kind), cfg)?;
    Table2Row::from_structure(spec.label(), &structure.invariant_factors)
}

/// A table row supplied as data rather than computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Fixture {
    /// `p^2-2*q^n`
    pub expr: String,
    pub structure: Vec<u64>,
    #[serde(flatten)]
    pub printed: SylowColumns,
    /// `**` on the counterexample row, empty otherwise.
    #[serde(default)]
    pub mark: String,
}

impl Table2Fixture {
    /// `(p, q, n)` parsed from `expr`.
    pub fn parameters(&self) -> Result<(u64, u64, u32)> {
        let bad = || Error::domain(format!("cannot parse {:?} as p^2-2*q^n", self.expr));
        let (p, rest) = self.expr.split_once("^2-2*").ok_or_else(bad)?;
        let (q, n) = rest.split_once('^').ok_or_else(bad)?;
        Ok((
            p.trim().parse().map_err(|_| bad())?,
            q.trim().parse().map_err(|_| bad())?,
            n.trim().parse().map_err(|_| bad())?,
        ))
    }

    pub fn starred(&self) -> bool {
        self.mark == "**"
    }
}

pub const TABLE2_FIXTURES: &str = include_str!("../fixtures/table2.jsonl");

/// Parse fixture records, one JSON object per line; blank lines and lines
/// starting with `#` are skipped. Every structure must be a chain.
pub fn load_fixtures(text: &str) -> Result<Vec<Table2Fixture>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fixture: Table2Fixture = serde_json::from_str(line)
            .map_err(|e| Error::domain(format!("fixture line {}: {e}", i + 1)))?;
        fixture.parameters()?;
        normalize_chain(&fixture.structure)?;
        out.push(fixture);
    }
    Ok(out)
}

pub fn table2_fixtures() -> Vec<Table2Fixture> {
    load_fixtures(TABLE2_FIXTURES).expect("bundled fixtures parse")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureCheck {
    pub fixture: Table2Fixture,
    pub row: Table2Row,
    /// Whether the computed columns multiply back to the structure.
    pub reassembles: bool,
    /// Printed columns that differ from the computed ones.
    pub column_mismatches: Vec<&'static str>,
    /// Whether the star mark agrees with the verdict.
    pub mark_agrees: bool,
}

pub fn check_fixture(fixture: &Table2Fixture) -> Result<FixtureCheck> {
    let row = Table2Row::from_structure(fixture.expr.clone(), &fixture.structure)?;
    let reassembles = row.columns.reassemble()? == row.structure;
    let column_mismatches = SylowColumns::column_names()
        .into_iter()
        .zip(row.columns.columns().into_iter().zip(fixture.printed.columns()))
        .filter(|(_, (computed, printed))| computed != printed)
        .map(|(name, _)| name)
        .collect();
    let mark_agrees = fixture.starred() == (row.verdict.kind == VerdictKind::Counterexample);
    Ok(FixtureCheck {
        fixture: fixture.clone(),
        row,
        reassembles,
        column_mismatches,
        mark_agrees,
    })
}

/// Fixture rows whose structure is a counterexample, in file order.
pub fn scan_fixtures(fixtures: &[Table2Fixture]) -> Result<Vec<(Table2Fixture, WadaVerdict)>> {
    let mut out = Vec::new();
    for fixture in fixtures {
        let verdict = classify(&fixture.structure)?;
        if verdict.kind == VerdictKind::Counterexample {
            out.push((fixture.clone(), verdict));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct ScanOutcome {
    pub counterexamples: Vec<(FieldSpec, WadaVerdict)>,
    /// Fields whose class group could not be computed within the limits.
    pub skipped: Vec<(FieldSpec, Error)>,
    pub examined: usize,
}

/// Classify every field in `members`, in the given order.
pub fn scan_counterexamples(members: &[FieldSpec], kind: OrderKind, cfg: &ClassGroupConfig) -> Result<ScanOutcome> {
    let mut outcome = ScanOutcome::default();
    for spec in members {
        match group_structure(spec.discriminant(kind), cfg) {
            Ok(structure) => {
                outcome.examined += 1;
                let verdict = classify(&structure.invariant_factors)?;
                if verdict.kind == VerdictKind::Counterexample {
                    outcome.counterexamples.push((spec.clone(), verdict));
                }
            }
            Err(e) if e.is_scale() => outcome.skipped.push((spec.clone(), e)),
            Err(e) => return Err(e),
        }
    }
    Ok(outcome)
}
