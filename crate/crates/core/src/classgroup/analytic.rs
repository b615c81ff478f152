//! Analytic class number estimate from a truncated Euler product.

use std::f64::consts::{PI, SQRT_2};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::intcore::{kronecker_i128, primes_up_to};

/// Kronecker symbol (disc|p) for a prime `p`.
pub(crate) fn chi(disc: &BigInt, p: u64) -> i32 {
    if p == 2 {
        return match disc.mod_floor(&BigInt::from(8)).to_u8().unwrap() {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let r = disc.mod_floor(&BigInt::from(p)).to_i128().unwrap();
    kronecker_i128(r, p as i128).unwrap()
}

/// `w sqrt|d| / (2 pi) * prod_{p <= bound} (1 - chi(p)/p)^-1`.
pub(crate) fn estimate(disc: &BigInt, truncation: u64) -> f64 {
    let w = match disc.to_i64() {
        Some(-3) => 6.0,
        Some(-4) => 4.0,
        _ => 2.0,
    };
    let log_l: f64 = primes_up_to(truncation)
        .into_iter()
        .map(|p| {
            let c = chi(disc, p) as f64;
            -(1.0 - c / p as f64).ln()
        })
        .sum();
    let abs = disc.magnitude().to_f64().unwrap();
    w * abs.sqrt() / (2.0 * PI) * log_l.exp()
}

/// Integer interval `[estimate / sqrt 2, estimate * sqrt 2]`.
pub(crate) fn interval(disc: &BigInt, truncation: u64) -> (u64, u64) {
    let est = estimate(disc, truncation);
    let lo = (est / SQRT_2).ceil().max(1.0) as u64;
    let hi = (est * SQRT_2).floor().max(1.0) as u64;
    (lo, hi.max(lo))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimates_bracket_small_class_numbers() {
        for (d, h) in [(-23i64, 3u64), (-71, 7), (-964, 12), (-11358372, 800), (-1_000_003, 0)] {
            let (lo, hi) = interval(&BigInt::from(d), 1_000_000);
            if h > 0 {
                assert!(lo <= h && h <= hi, "{d}: [{lo}, {hi}]");
            }
        }
    }

    #[test]
    fn character_at_two() {
        assert_eq!(chi(&BigInt::from(-23), 2), 1);
        assert_eq!(chi(&BigInt::from(-3), 2), -1);
        assert_eq!(chi(&BigInt::from(-4), 2), 0);
        for d in [-3i64, -7, -11, -15, -19, -20, -23, -24] {
            assert_eq!(chi(&BigInt::from(d), 2), kronecker_i128(d as i128, 2).unwrap());
        }
    }
}
