//! Class number and group structure of form class groups of negative
//! discriminant, plus genus-theoretic 2-rank.

mod analytic;
mod builder;
mod enumerate;
mod snf;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::intcore::{factor, factor_u64, is_prime_u64};
use crate::qform::{Discriminant, FormInt, QForm};

use builder::{GroupBuilder, Target};

pub use snf::{smith_normal_form, SmithForm};

/// Computation limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupConfig {
    /// Largest |disc| for which reduced forms are enumerated.
    pub enumeration_bound: u64,
    /// Euler product truncation for the analytic estimate.
    pub bsgs_truncation: u64,
    /// Automatic method selection enumerates at or below this |disc|.
    pub enumeration_cutoff: u64,
    /// Largest |disc| attempted with baby-step giant-step.
    pub bsgs_disc_limit: u128,
}

impl Default for ClassGroupConfig {
    fn default() -> Self {
        ClassGroupConfig {
            enumeration_bound: 1_000_000_000,
            bsgs_truncation: 1_000_000,
            enumeration_cutoff: 1_000_000,
            bsgs_disc_limit: 10u128.pow(25),
        }
    }
}

/// The class group as a product of cyclic groups `C_{h_1} x ... x C_{h_t}`
/// with `h_{i+1} | h_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupStructure {
    pub discriminant: Discriminant,
    pub h: u64,
    /// Descending invariant factors; empty for the trivial group.
    pub invariant_factors: Vec<u64>,
    /// One reduced form per invariant factor, of exactly that order.
    pub generators: Vec<QForm>,
}

impl ClassGroupStructure {
    pub fn even_factor_count(&self) -> usize {
        self.invariant_factors.iter().filter(|h| *h % 2 == 0).count()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenusInfo {
    /// Distinct primes dividing the discriminant.
    pub ramified_prime_count: usize,
    pub two_rank: usize,
}

fn enumeration_disc(disc: &Discriminant, bound: u64) -> Result<i64> {
    let abs = disc.abs();
    match abs.to_u64() {
        Some(v) if v <= bound && v <= 1_000_000_000_000_000_000 => Ok(-(v as i64)),
        _ => Err(Error::ScaleLimit(format!(
            "|disc| = {abs} exceeds the enumeration bound {bound}"
        ))),
    }
}

/// Every primitive reduced form of discriminant `disc`, ordered by `(a, b)`.
pub fn enumerate_reduced_forms(disc: &Discriminant, cfg: &ClassGroupConfig) -> Result<Vec<QForm>> {
    let d = enumeration_disc(disc, cfg.enumeration_bound)?;
    let mut out = Vec::new();
    enumerate::for_each_reduced_form(d, |a, b, c| {
        out.push(QForm::from_parts(BigInt::from(a), BigInt::from(b), BigInt::from(c)))
    });
    Ok(out)
}

/// Class number by counting reduced forms.
pub fn class_number(disc: &Discriminant, cfg: &ClassGroupConfig) -> Result<u64> {
    let d = enumeration_disc(disc, cfg.enumeration_bound)?;
    Ok(enumerate::count_reduced_forms(d))
}

/// `h(d0 f^2)` from `h(d0)` for a fundamental `d0`.
pub fn class_number_from_conductor(fundamental: &Discriminant, h0: u64, conductor: &BigUint) -> u64 {
    if conductor.is_one() {
        return h0;
    }
    let mut h = h0;
    for (p, e) in factor(conductor).factors() {
        let p = p.to_u64().expect("conductor prime fits a word");
        let chi = analytic::chi(fundamental.value(), p) as i64;
        h *= p.pow(e - 1) * (p as i64 - chi) as u64;
    }
    let units = match fundamental.value().to_i64() {
        Some(-3) => 3,
        Some(-4) => 2,
        _ => 1,
    };
    h / units
}

/// Class number from the analytic estimate, pinned by baby-step giant-step:
/// the subgroup generated by prime forms grows until exactly one multiple of
/// its order remains in the estimate's interval. Non-fundamental
/// discriminants go through their fundamental part and conductor.
pub fn class_number_bsgs(disc: &Discriminant, cfg: &ClassGroupConfig) -> Result<u64> {
    if !disc.is_fundamental() {
        let (d0, f) = disc.fundamental_part();
        let h0 = class_number_bsgs(&d0, cfg)?;
        return Ok(class_number_from_conductor(&d0, h0, &f));
    }
    let abs = disc.abs();
    if abs.to_u128().is_none_or(|v| v > cfg.bsgs_disc_limit) {
        return Err(Error::ScaleLimit(format!(
            "|disc| = {abs} exceeds the baby-step giant-step limit {}",
            cfg.bsgs_disc_limit
        )));
    }
    if abs <= BigUint::from(4u32) {
        return Ok(1);
    }
    let (lo, hi) = analytic::interval(disc.value(), cfg.bsgs_truncation);
    match disc.small() {
        Some(d) => build_group(d, Target::Interval(lo, hi), true).map(|(_, h)| h),
        None => build_group(disc.value().clone(), Target::Interval(lo, hi), true).map(|(_, h)| h),
    }
}

/// Class number by whichever method suits the size of `disc`.
pub fn compute_class_number(disc: &Discriminant, cfg: &ClassGroupConfig) -> Result<u64> {
    let abs = disc.abs();
    let cutoff = cfg.enumeration_cutoff.min(cfg.enumeration_bound);
    if abs <= BigUint::from(cutoff) {
        return class_number(disc, cfg);
    }
    if abs.to_u128().is_some_and(|v| v <= cfg.bsgs_disc_limit) {
        return class_number_bsgs(disc, cfg);
    }
    class_number(disc, cfg).map_err(|_| {
        Error::ScaleLimit(format!(
            "|disc| = {abs} exceeds the enumeration bound {} and the baby-step giant-step limit {}",
            cfg.enumeration_bound, cfg.bsgs_disc_limit
        ))
    })
}

/// Exact order of the class of `f`, given `h` with `f^h` principal.
pub fn element_order<T: FormInt>(f: &QForm<T>, h: u64) -> Result<u64> {
    if h == 0 || !f.pow_u64(h).is_principal() {
        return Err(Error::InvalidExponent {
            exponent: h.to_string(),
        });
    }
    Ok(builder::order_from_multiple(&f.reduce(), h))
}

/// Invariant factors and generators of the class group.
pub fn group_structure(disc: &Discriminant, cfg: &ClassGroupConfig) -> Result<ClassGroupStructure> {
    let h = compute_class_number(disc, cfg)?;
    let (invariant_factors, generators) = match disc.small() {
        Some(d) => structure_with(d, h, disc, cfg)?,
        None => structure_with(disc.value().clone(), h, disc, cfg)?,
    };
    Ok(ClassGroupStructure {
        discriminant: disc.clone(),
        h,
        invariant_factors,
        generators,
    })
}

fn structure_with<T: FormInt>(
    d: T,
    h: u64,
    disc: &Discriminant,
    cfg: &ClassGroupConfig,
) -> Result<(Vec<u64>, Vec<QForm>)> {
    let builder = match build_group(d.clone(), Target::Known(h), false) {
        Ok((b, _)) => b,
        // prime forms may miss classes when the order is non-maximal;
        // fall back to every reduced form when they can be listed
        Err(Error::CertificationFailure(_)) if enumeration_disc(disc, cfg.enumeration_bound).is_ok() => {
            let mut b = GroupBuilder::new(d);
            for f in enumerate_reduced_forms(disc, cfg)? {
                let f = f.convert::<T>().expect("reduced coefficients fit");
                b.absorb(&f, Target::Known(h))?;
                if b.order() == h {
                    break;
                }
            }
            b
        }
        Err(e) => return Err(e),
    };
    if builder.order() != h {
        return Err(Error::CertificationFailure(format!(
            "generated subgroup has order {} but h = {h}",
            builder.order()
        )));
    }
    Ok((
        builder.orders().to_vec(),
        builder.basis().iter().map(QForm::to_big).collect(),
    ))
}

/// Prime forms in increasing norm until `target` is met.
fn build_group<T: FormInt>(
    disc: T,
    mut target: Target,
    stop_at_certificate: bool,
) -> Result<(GroupBuilder<T>, u64)> {
    const MAX_UNCERTIFIED_PRIMES: usize = 5_000;
    let mut builder = GroupBuilder::new(disc.clone());
    if target == Target::Known(1) {
        return Ok((builder, 1));
    }
    // classes all contain a reduced form with a <= sqrt(|disc|/3)
    let bound = (disc.to_bigint().magnitude() / 3u32).sqrt();
    let bound = bound.to_u64().unwrap_or(u64::MAX);
    let mut tried = 0usize;
    let mut ell = 1u64;
    while ell < bound {
        ell += 1;
        if !is_prime_u64(ell) {
            continue;
        }
        let Ok(x) = QForm::prime_form(&disc, ell) else {
            continue;
        };
        tried += 1;
        if x.is_principal() {
            continue;
        }
        builder.absorb(&x, target)?;
        let order = builder.order();
        match target {
            Target::Known(h) => {
                if order == h {
                    return Ok((builder, h));
                }
                if h % order != 0 {
                    return Err(Error::CertificationFailure(format!(
                        "subgroup order {order} does not divide h = {h}"
                    )));
                }
            }
            Target::Interval(lo, hi) => {
                let multiples = hi / order - (lo - 1) / order;
                if multiples == 0 {
                    return Err(Error::CertificationFailure(format!(
                        "subgroup order {order} has no multiple in [{lo}, {hi}]"
                    )));
                }
                if multiples == 1 {
                    let h = lo.div_ceil(order) * order;
                    if stop_at_certificate || order == h {
                        return Ok((builder, h));
                    }
                    target = Target::Known(h);
                } else if tried >= MAX_UNCERTIFIED_PRIMES {
                    break;
                }
            }
        }
    }
    Err(Error::CertificationFailure(format!(
        "prime forms up to {ell} did not pin down the class group"
    )))
}

/// Genus theory for a fundamental discriminant: 2-rank = r - 1.
pub fn two_rank(disc: &Discriminant) -> Result<GenusInfo> {
    if !disc.is_fundamental() {
        return Err(Error::domain(format!("{disc} is not fundamental")));
    }
    Ok(genus_two_rank(disc))
}

/// 2-rank from the number of generic characters, valid for any negative
/// discriminant, including non-maximal orders.
pub fn genus_two_rank(disc: &Discriminant) -> GenusInfo {
    let abs = disc.abs();
    let primes = factor(&abs);
    let r = primes.distinct_primes();
    let odd = primes.factors().iter().filter(|(p, _)| *p != BigUint::from(2u32)).count();
    let characters = if abs.is_odd() {
        odd
    } else {
        let n = &abs / 4u32;
        let n8 = (&n % 8u32).to_u32().unwrap();
        match n8 % 4 {
            3 => odd,
            1 | 2 => odd + 1,
            _ if n8 == 4 => odd + 1,
            _ => odd + 2,
        }
    };
    GenusInfo {
        ramified_prime_count: r,
        two_rank: characters - 1,
    }
}

/// The `ell`-parts of each invariant factor that exceed 1, ascending.
pub fn sylow_parts(factors: &[u64], ell: u64) -> Vec<u64> {
    let mut parts: Vec<u64> = factors
        .iter()
        .map(|&h| {
            let mut part = 1;
            let mut rest = h;
            while rest % ell == 0 {
                rest /= ell;
                part *= ell;
            }
            part
        })
        .filter(|&p| p > 1)
        .collect();
    parts.sort_unstable();
    parts
}

/// Distinct primes dividing any invariant factor, ascending.
pub fn primes_of(factors: &[u64]) -> Vec<u64> {
    let mut primes: Vec<u64> = factors
        .iter()
        .flat_map(|&h| factor_u64(h).into_iter().map(|(p, _)| p))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    primes
}
