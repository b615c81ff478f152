mod common;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use quadclass::classgroup::{group_structure, ClassGroupConfig};
use quadclass::intcore::{factor, factor_u64, is_prime, is_prime_u64, kronecker_i128, squarefree_decompose};
use quadclass::{Discriminant, QForm};

fn naive_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// A non-principal-ish form of discriminant `disc` built from prime forms.
fn form_from_seed(disc: &BigInt, seed: u64) -> QForm {
    let mut f = QForm::principal(disc);
    let mut ell = 2 + seed % 500;
    let mut used = 0;
    while used < 3 {
        if let Ok(g) = QForm::prime_form(disc, ell) {
            f = f.compose(&g.pow_u64(seed % 97 + used)).unwrap();
            used += 1;
        }
        ell += 1;
    }
    f
}

fn big_disc() -> impl Strategy<Value = BigInt> {
    (any::<u64>(), any::<u64>()).prop_map(|(hi, lo)| {
        let m: BigInt = (BigInt::from(hi | 1) << 64) + BigInt::from(lo);
        let d = -m;
        // push into 0 or 1 mod 4
        let r: BigInt = (&d % 4 + 4) % 4;
        if r.is_zero() || r.is_one() {
            d
        } else {
            d - r
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn factorization_reassembles(n in 1u64..u64::MAX) {
        let f = factor_u64(n);
        prop_assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
        prop_assert!(f.iter().all(|&(p, _)| is_prime_u64(p)));
        prop_assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn big_factorization_reassembles(a in 2u64..1 << 40, b in 2u64..1 << 40) {
        let n = BigUint::from(a) * BigUint::from(b);
        let f = factor(&n);
        prop_assert_eq!(f.product(), n.clone());
        let (s, d) = squarefree_decompose(&n);
        prop_assert_eq!(&s * &s * &d, n);
    }

    #[test]
    fn primality_matches_trial_division(n in 0u64..1_000_000) {
        prop_assert_eq!(is_prime_u64(n), naive_prime(n));
        prop_assert_eq!(is_prime(&BigUint::from(n)), naive_prime(n));
    }

    #[test]
    fn kronecker_is_multiplicative(a in -10_000i128..10_000, b in -10_000i128..10_000, n in 1i128..10_000) {
        prop_assert_eq!(
            kronecker_i128(a * b, n).unwrap(),
            kronecker_i128(a, n).unwrap() * kronecker_i128(b, n).unwrap()
        );
        let odd = 2 * n + 1;
        prop_assert_eq!(
            kronecker_i128(a, odd * n).unwrap(),
            kronecker_i128(a, odd).unwrap() * kronecker_i128(a, n).unwrap()
        );
    }

    #[test]
    fn prime_form_rejects_bad_discriminants(m in 1i64..1_000_000, ell in 2u64..100) {
        let bad = if (-m).rem_euclid(4) >= 2 { -m } else { m };
        prop_assert!(QForm::prime_form(&BigInt::from(bad), ell).is_err());
    }

    #[test]
    fn big_group_laws(disc in big_disc(), s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (x, y, z) = (form_from_seed(&disc, s1), form_from_seed(&disc, s2), form_from_seed(&disc, s3));
        let e = QForm::principal(&disc);
        prop_assert!(x.is_reduced());
        prop_assert_eq!(x.compose(&y).unwrap().compose(&z).unwrap(), x.compose(&y.compose(&z).unwrap()).unwrap());
        prop_assert_eq!(x.compose(&y).unwrap(), y.compose(&x).unwrap());
        prop_assert_eq!(x.compose(&e).unwrap(), x.clone());
        prop_assert!(x.compose(&x.inverse()).unwrap().is_principal());
        prop_assert_eq!(x.reduce(), x.clone());
    }

    #[test]
    fn pow_is_additive(disc in big_disc(), seed in any::<u64>(), a in 0u64..5000, b in 0u64..5000) {
        let x = form_from_seed(&disc, seed);
        prop_assert_eq!(x.pow_u64(a).compose(&x.pow_u64(b)).unwrap(), x.pow_u64(a + b));
        prop_assert_eq!(x.pow(&BigUint::from(a)), x.pow_u64(a));
        prop_assert_eq!(x.square(), x.pow_u64(2));
    }

    #[test]
    fn small_and_big_paths_agree(m in 3i64..1_000_000_000, seed in any::<u64>()) {
        // round -m down to the nearest value that is 0 or 1 mod 4
        let disc = match (-m).rem_euclid(4) {
            r @ (2 | 3) => -m - (r - 1),
            _ => -m,
        };
        let big = BigInt::from(disc);
        let x = form_from_seed(&big, seed);
        let y = form_from_seed(&big, seed.wrapping_mul(31));
        let small = x.convert::<i128>().unwrap().compose(&y.convert::<i128>().unwrap()).unwrap();
        prop_assert_eq!(small.to_big(), x.compose(&y).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bsgs_matches_enumeration(m in 1000i64..10_000_000) {
        let disc = -m;
        prop_assume!(common::is_fundamental(disc));
        let d = Discriminant::from_i64(disc).unwrap();
        let forced = ClassGroupConfig { enumeration_cutoff: 0, ..ClassGroupConfig::default() };
        let bsgs = group_structure(&d, &forced).unwrap();
        let listed = group_structure(&d, &ClassGroupConfig::default()).unwrap();
        prop_assert_eq!(bsgs.h, common::reduced_forms(disc).len() as u64);
        prop_assert_eq!(bsgs.invariant_factors, listed.invariant_factors);
        prop_assert!(bsgs.generators.iter().all(|g| g.discriminant() == BigInt::from(disc)));
    }
}

#[test]
fn structure_matches_element_orders_for_non_maximal_orders() {
    for m in (3..4000i64).filter(|m| matches!((-m).rem_euclid(4), 0 | 1)) {
        let disc = -m;
        if common::is_fundamental(disc) {
            continue;
        }
        let forms = common::reduced_forms(disc);
        let g = group_structure(&Discriminant::from_i64(disc).unwrap(), &ClassGroupConfig::default()).unwrap();
        assert_eq!(g.invariant_factors, common::invariants_from_elements(&forms), "disc {disc}");
        assert_eq!(g.h.to_usize().unwrap(), forms.len());
    }
}
