//! Primality testing.
//!
//! Inputs below 3317044064679887385961981 are decided by Miller–Rabin with
//! the first thirteen prime bases, which is deterministic in that range.
//! Larger inputs additionally run a strong Lucas test (Baillie–PSW).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::kronecker::jacobi_big;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// psi_13: smallest strong pseudoprime to all of `MR_BASES`.
const MR_DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

/// Primes up to and including `limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::with_capacity(n / 10 + 8);
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primality test for arbitrary-precision integers.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    if !miller_rabin_big(n) {
        return false;
    }
    match n.to_u128() {
        Some(v) if v < MR_DETERMINISTIC_LIMIT => true,
        _ => strong_lucas(n),
    }
}

fn miller_rabin_big(n: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
/// `n` must be odd and free of the small prime bases.
fn strong_lucas(n: &BigUint) -> bool {
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let nn = BigInt::from(n.clone());
    let mut disc: i64 = 5;
    loop {
        match jacobi_big(&BigInt::from(disc), &nn) {
            -1 => break,
            0 => {
                if BigInt::from(disc.abs()) != nn {
                    return false;
                }
            }
            _ => {}
        }
        disc = if disc > 0 { -(disc + 2) } else { -disc + 2 };
    }
    let p = BigInt::one();
    let q = BigInt::from((1 - disc) / 4);
    let d_big = BigInt::from(disc);

    let n_plus_1: BigInt = &nn + 1;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let d = &n_plus_1 >> s;

    let half = |x: BigInt| -> BigInt {
        let x: BigInt = if x.is_odd() { x + &nn } else { x };
        let halved: BigInt = x >> 1usize;
        halved.mod_floor(&nn)
    };

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(&nn);
    let bits = d.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&nn);
        v = (&v * &v - &qk * 2u32).mod_floor(&nn);
        qk = (&qk * &qk).mod_floor(&nn);
        if d.bit(i) {
            let u_next = half(&p * &u + &v);
            let v_next = half(&d_big * &u + &p * &v);
            u = u_next;
            v = v_next;
            qk = (&qk * &q).mod_floor(&nn);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk * 2u32).mod_floor(&nn);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&nn);
    }
    false
}
