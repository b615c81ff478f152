//! The fields `K = Q(sqrt(p^2 - 2 q^n))` for distinct odd primes `p`, `q`
//! and odd `n >= 3`.
//!
//! With `p^2 - 2q^n = -s^2 D` (`D` squarefree), the prime 2 ramifies as
//! `(2) = P^2` and `q` splits as `(q) = Q Q'`. The class of `A = P Q`
//! satisfies `A^n = (2^((n-1)/2) (p + s sqrt(-D)))`, so its order divides
//! `n`; it is exactly `n` unless `2(p + s sqrt(-D))` is an `l`-th power for
//! some prime `l | n`, which [`proposition_oracle`] rules out by search.
//!
//! Class data can be taken in the maximal order (discriminant `-4D`) or in
//! `Z[sqrt(p^2 - 2q^n)]` (discriminant `4(p^2 - 2q^n)`); the two agree when
//! `s = 1`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::classgroup::{element_order, group_structure, ClassGroupConfig, ClassGroupStructure};
use crate::error::{Error, Result};
use crate::intcore::{factor, is_perfect_square, is_prime_u64, squarefree_decompose};
use crate::qform::{Discriminant, FormInt, QForm};

/// Which quadratic order the class group is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// The ring of integers, discriminant `-4D`.
    Maximal,
    /// `Z[sqrt(p^2 - 2q^n)]`, discriminant `4(p^2 - 2q^n) = -4 s^2 D`.
    Radicand,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub q: u64,
    pub n: u32,
    /// `p^2 - 2q^n`, negative.
    pub d: BigInt,
    /// Square part: `d = -s^2 D`.
    pub s: BigUint,
    /// Squarefree part `D`, always `1 mod 4`.
    pub squarefree: BigUint,
    /// Field discriminant `-4D`.
    pub delta: Discriminant,
    /// Discriminant `4d` of `Z[sqrt(d)]`.
    pub radicand_delta: Discriminant,
}

impl FieldSpec {
    pub fn discriminant(&self, kind: OrderKind) -> &Discriminant {
        match kind {
            OrderKind::Maximal => &self.delta,
            OrderKind::Radicand => &self.radicand_delta,
        }
    }

    /// Label in the form `p^2-2*q^n`.
    pub fn label(&self) -> String {
        format!("{}^2-2*{}^{}", self.p, self.q, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypothesisReport {
    /// `p^2 < 2q^n`
    pub size_ok: bool,
    /// `2q^n - p^2` is not a square
    pub nonsquare_ok: bool,
    /// `3 q^(n/3) != p + 2`, vacuous when `3 ∤ n`
    pub cube_ok: bool,
    pub all_ok: bool,
}

fn two_q_pow(q: u64, n: u32) -> BigUint {
    BigUint::from(q).pow(n) * 2u32
}

fn validate(p: u64, q: u64, n: u32) -> Result<()> {
    let fail = |what: &str| Err(Error::domain(format!("(p, q, n) = ({p}, {q}, {n}): {what}")));
    if p == 2 || !is_prime_u64(p) {
        return fail("p must be an odd prime");
    }
    if q == 2 || !is_prime_u64(q) {
        return fail("q must be an odd prime");
    }
    if p == q {
        return fail("p and q must be distinct");
    }
    if n < 3 || n % 2 == 0 {
        return fail("n must be odd and at least 3");
    }
    Ok(())
}

pub fn check_hypotheses(p: u64, q: u64, n: u32) -> Result<HypothesisReport> {
    validate(p, q, n)?;
    let two_qn = two_q_pow(q, n);
    let p2 = BigUint::from(p).pow(2);
    let size_ok = p2 < two_qn;
    let nonsquare_ok = !size_ok || !is_perfect_square(&(&two_qn - &p2));
    let cube_ok = n % 3 != 0 || BigUint::from(q).pow(n / 3) * 3u32 != BigUint::from(p + 2);
    Ok(HypothesisReport {
        size_ok,
        nonsquare_ok,
        cube_ok,
        all_ok: size_ok && nonsquare_ok && cube_ok,
    })
}

pub fn build_field_spec(p: u64, q: u64, n: u32) -> Result<FieldSpec> {
    validate(p, q, n)?;
    let two_qn = two_q_pow(q, n);
    let p2 = BigUint::from(p).pow(2);
    if p2 >= two_qn {
        return Err(Error::domain(format!(
            "(p, q, n) = ({p}, {q}, {n}): p^2 < 2q^n fails"
        )));
    }
    let magnitude = &two_qn - &p2;
    let (s, squarefree) = squarefree_decompose(&magnitude);
    debug_assert_eq!(&squarefree % 4u32, BigUint::one());
    let d = -BigInt::from(magnitude);
    let delta = Discriminant::with_flag(-BigInt::from(squarefree.clone()) * 4, true)?;
    let radicand_delta = Discriminant::with_flag(&d * 4, s.is_one())?;
    Ok(FieldSpec {
        p,
        q,
        n,
        d,
        s,
        squarefree,
        delta,
        radicand_delta,
    })
}

/// All family members with `p <= p_max`, `q <= q_max` and `n` in `n_set`,
/// ordered by `(|d|, p, q, n)`. Tuples with `p^2 >= 2q^n` are not members
/// and are left out.
pub fn family_members(p_max: u64, q_max: u64, n_set: &[u32]) -> Result<Vec<FieldSpec>> {
    if let Some(&n) = n_set.iter().find(|&&n| n < 3 || n % 2 == 0) {
        return Err(Error::domain(format!("n = {n}: n must be odd and at least 3")));
    }
    let odd_primes = |max: u64| (3..=max).filter(|&x| is_prime_u64(x)).collect::<Vec<_>>();
    let mut ns = n_set.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut members = Vec::new();
    for &p in &odd_primes(p_max) {
        for &q in &odd_primes(q_max) {
            for &n in &ns {
                if p == q || BigUint::from(p).pow(2) >= two_q_pow(q, n) {
                    continue;
                }
                members.push(build_field_spec(p, q, n)?);
            }
        }
    }
    members.sort_by(|x, y| {
        (x.d.magnitude(), x.p, x.q, x.n).cmp(&(y.d.magnitude(), y.p, y.q, y.n))
    });
    Ok(members)
}

fn class_a_with<T: FormInt>(disc: &T, q: u64) -> Result<QForm<T>> {
    let above_two = QForm::prime_form(disc, 2)?;
    let above_q = QForm::prime_form(disc, q)?;
    Ok(above_two.mul(&above_q))
}

/// The reduced form of the class `[A] = [P Q]`, `N(P) = 2`, `N(Q) = q`.
pub fn ideal_class_a(spec: &FieldSpec, kind: OrderKind) -> Result<QForm> {
    let disc = spec.discriminant(kind);
    match disc.small() {
        Some(d) => class_a_with(&d, spec.q).map(|f| f.to_big()),
        None => class_a_with(disc.value(), spec.q),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCheck {
    pub class_a: QForm,
    pub order: u64,
    pub structure: ClassGroupStructure,
}

impl OrderCheck {
    pub fn h(&self) -> u64 {
        self.structure.h
    }
}

/// Order of `[A]` and the structure of the class group it lives in,
/// regardless of the theorem's hypotheses.
pub fn order_of_class_a(spec: &FieldSpec, kind: OrderKind, cfg: &ClassGroupConfig) -> Result<OrderCheck> {
    let class_a = ideal_class_a(spec, kind)?;
    let structure = group_structure(spec.discriminant(kind), cfg)?;
    let order = match spec.discriminant(kind).small() {
        Some(_) => element_order(&class_a.convert::<i128>().unwrap(), structure.h)?,
        None => element_order(&class_a, structure.h)?,
    };
    Ok(OrderCheck {
        class_a,
        order,
        structure,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderVerification {
    pub order: u64,
    pub matches: bool,
    pub check: OrderCheck,
}

/// Certify that `[A]` has order exactly `n`. Refuses tuples outside the
/// theorem's hypotheses.
pub fn verify_order_n(spec: &FieldSpec, kind: OrderKind, cfg: &ClassGroupConfig) -> Result<OrderVerification> {
    let report = check_hypotheses(spec.p, spec.q, spec.n)?;
    if !report.all_ok {
        return Err(Error::domain(format!(
            "{}: hypotheses fail ({report:?})",
            spec.label()
        )));
    }
    let check = order_of_class_a(spec, kind, cfg)?;
    Ok(OrderVerification {
        order: check.order,
        matches: check.order == spec.n as u64,
        check,
    })
}

/// Integers `u, v` with `u^2 + D v^2 = 2 q^m`, `n = l m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionCandidate {
    pub u: BigInt,
    pub v: BigInt,
    pub ell: u64,
    pub m: u32,
    /// `s / v` when `v | s`.
    pub t: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObstructionReport {
    /// `8 q^n = (u^2 + D v^2)^l` has no solution: the exponent of 2 on the
    /// left is 3, which is not a multiple of `l`.
    NormObstruction,
    /// Exhaustive search for `l = 3`.
    Searched {
        /// Solutions of `u^2 + D v^2 = 2 q^m`, all sign choices counted.
        norm_solutions: usize,
        /// Solutions also matching both coordinates of `2 alpha = (u + v sqrt(-D))^3`.
        candidates: Vec<ObstructionCandidate>,
    },
}

impl ObstructionReport {
    pub fn candidate_count(&self) -> usize {
        match self {
            ObstructionReport::NormObstruction => 0,
            ObstructionReport::Searched { candidates, .. } => candidates.len(),
        }
    }
}

/// Default cap on the number of `v` values the search may visit.
pub const DEFAULT_SEARCH_BOUND: u64 = 100_000_000;

/// Search for `u + v sqrt(-D)` whose `l`-th power is `2(p + s sqrt(-D))`.
pub fn proposition_oracle(spec: &FieldSpec, ell: u64, search_bound: u64) -> Result<ObstructionReport> {
    if !is_prime_u64(ell) || spec.n as u64 % ell != 0 {
        return Err(Error::domain(format!(
            "{ell} is not a prime divisor of n = {}",
            spec.n
        )));
    }
    if ell != 3 {
        return Ok(ObstructionReport::NormObstruction);
    }
    let m = spec.n / 3;
    let target = two_q_pow(spec.q, m);
    let big_d = &spec.squarefree;
    let v_max = (&target / big_d).sqrt();
    if v_max.to_u64().is_none_or(|v| v >= search_bound) {
        return Err(Error::ScaleLimit(format!(
            "search over |v| <= {v_max} exceeds bound {search_bound}"
        )));
    }
    let v_max = v_max.to_u64().unwrap();

    let d_int = BigInt::from(big_d.clone());
    let two_p = BigInt::from(2 * spec.p);
    let two_s = BigInt::from(spec.s.clone()) * 2;
    let mut norm_solutions = 0;
    let mut candidates = Vec::new();
    for v_abs in 0..=v_max {
        let dv2 = big_d * BigUint::from(v_abs).pow(2);
        let rest = &target - dv2;
        let u_abs = rest.sqrt();
        if &u_abs * &u_abs != rest {
            continue;
        }
        let u_abs = BigInt::from(u_abs);
        let v_abs = BigInt::from(v_abs);
        let mut us = vec![u_abs.clone()];
        if !u_abs.is_zero() {
            us.push(-u_abs);
        }
        let mut vs = vec![v_abs.clone()];
        if !v_abs.is_zero() {
            vs.push(-v_abs);
        }
        for u in &us {
            for v in &vs {
                norm_solutions += 1;
                let real = u.pow(3) - u * v * v * &d_int * 3;
                let imag = u * u * v * 3 - v.pow(3) * &d_int;
                if real == two_p && imag == two_s {
                    let t = (!v.is_zero() && BigInt::from(spec.s.clone()).is_multiple_of(v))
                        .then(|| BigInt::from(spec.s.clone()) / v);
                    candidates.push(ObstructionCandidate {
                        u: u.clone(),
                        v: v.clone(),
                        ell,
                        m,
                        t,
                    });
                }
            }
        }
    }
    Ok(ObstructionReport::Searched {
        norm_solutions,
        candidates,
    })
}

/// Prime divisors of `n`.
pub fn prime_divisors(n: u32) -> Vec<u64> {
    factor(&BigUint::from(n))
        .factors()
        .iter()
        .map(|(p, _)| p.to_u64().unwrap())
        .collect()
}

/// Outcome of checking one field against the theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldStatus {
    /// Hypotheses hold and every check agrees with the theorem.
    Verified,
    /// Hypotheses fail; results are reported but not held to the theorem.
    Exempt,
    /// A class group computation hit a scale limit.
    Skipped,
    /// A check disagrees with the theorem or with genus theory.
    Inconsistent,
}

impl FieldStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            FieldStatus::Verified => "verified",
            FieldStatus::Exempt => "exempt",
            FieldStatus::Skipped => "skipped",
            FieldStatus::Inconsistent => "inconsistent",
        }
    }
}

/// Every check run on a family member, in both orders.
#[derive(Debug, Clone)]
pub struct FieldReport {
    pub spec: FieldSpec,
    pub hypotheses: HypothesisReport,
    pub radicand: Result<OrderCheck>,
    pub maximal: Result<OrderCheck>,
    /// One entry per prime divisor of `n`.
    pub oracle: Vec<(u64, Result<ObstructionReport>)>,
}

/// Count of even invariant factors against the number of primes dividing
/// the discriminant.
pub fn genus_consistent(check: &OrderCheck) -> bool {
    let r = factor(&check.structure.discriminant.abs()).distinct_primes();
    check.structure.even_factor_count() + 1 == r
}

impl FieldReport {
    pub fn checks(&self) -> [(OrderKind, &Result<OrderCheck>); 2] {
        [(OrderKind::Radicand, &self.radicand), (OrderKind::Maximal, &self.maximal)]
    }

    /// `order([A]) = n` and `n | h` in the given order; None if it was not
    /// computed.
    pub fn theorem_holds_in(&self, kind: OrderKind) -> Option<bool> {
        let n = self.spec.n as u64;
        let check = match kind {
            OrderKind::Radicand => &self.radicand,
            OrderKind::Maximal => &self.maximal,
        };
        check.as_ref().ok().map(|c| c.order == n && c.h() % n == 0)
    }

    /// The theorem's conclusion in `Z[sqrt(p^2 - 2q^n)]`.
    pub fn theorem_holds(&self) -> Option<bool> {
        self.theorem_holds_in(OrderKind::Radicand)
    }

    /// Hypotheses hold but the maximal order has no class of order `n`.
    /// Happens only when `s > 1`, e.g. `(19, 3, 5)` with field `Q(sqrt(-5))`.
    pub fn field_exception(&self) -> bool {
        self.hypotheses.all_ok && self.theorem_holds_in(OrderKind::Maximal) == Some(false)
    }

    pub fn genus_holds(&self) -> Option<bool> {
        let mut ok = true;
        for (_, check) in self.checks() {
            ok &= genus_consistent(check.as_ref().ok()?);
        }
        Some(ok)
    }

    pub fn oracle_candidates(&self) -> usize {
        self.oracle
            .iter()
            .filter_map(|(_, r)| r.as_ref().ok())
            .map(ObstructionReport::candidate_count)
            .sum()
    }

    pub fn status(&self) -> FieldStatus {
        if self.genus_holds() == Some(false) {
            return FieldStatus::Inconsistent;
        }
        if !self.hypotheses.all_ok {
            return FieldStatus::Exempt;
        }
        match self.theorem_holds() {
            None => FieldStatus::Skipped,
            Some(true) if self.oracle_candidates() == 0 => FieldStatus::Verified,
            Some(_) => FieldStatus::Inconsistent,
        }
    }
}

/// Run the order, genus and oracle checks on one field.
pub fn verify_field(spec: &FieldSpec, cfg: &ClassGroupConfig, search_bound: u64) -> FieldReport {
    let hypotheses = check_hypotheses(spec.p, spec.q, spec.n).expect("spec was validated");
    let oracle = prime_divisors(spec.n)
        .into_iter()
        .map(|ell| (ell, proposition_oracle(spec, ell, search_bound)))
        .collect();
    FieldReport {
        spec: spec.clone(),
        hypotheses,
        radicand: order_of_class_a(spec, OrderKind::Radicand, cfg),
        maximal: order_of_class_a(spec, OrderKind::Maximal, cfg),
        oracle,
    }
}
