use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

use super::prime::{mul_mod, pow_mod};
use crate::error::{Error, Result};

/// (2|n) for odd n, read off n mod 8.
fn two_sign<T: Integer + Clone + FromPrimitive>(n: &T) -> i32 {
    let r = n.mod_floor(&T::from_u8(8).unwrap());
    if r == T::from_u8(3).unwrap() || r == T::from_u8(5).unwrap() {
        -1
    } else {
        1
    }
}

/// Kronecker symbol over any signed integer type.
fn kronecker_generic<T>(a: T, b: T) -> Option<i32>
where
    T: Integer + Signed + Clone + FromPrimitive,
{
    let two = T::from_u8(2).unwrap();
    let four = T::from_u8(4).unwrap();
    let three = T::from_u8(3).unwrap();
    let (mut a, mut b) = (a, b);
    if b.is_zero() {
        if a.is_zero() {
            return None;
        }
        return Some(if a.abs().is_one() { 1 } else { 0 });
    }
    if a.is_even() && b.is_even() {
        return Some(0);
    }
    let mut k = 1;
    let mut v = 0u32;
    while b.is_even() {
        v += 1;
        b = b / two.clone();
    }
    if v % 2 == 1 {
        k = two_sign(&a);
    }
    if b.is_negative() {
        b = -b;
        if a.is_negative() {
            k = -k;
        }
    }
    loop {
        if a.is_zero() {
            return Some(if b.is_one() { k } else { 0 });
        }
        let mut v = 0u32;
        while a.is_even() {
            v += 1;
            a = a / two.clone();
        }
        if v % 2 == 1 {
            k *= two_sign(&b);
        }
        if a.mod_floor(&four) == three && b.mod_floor(&four) == three {
            k = -k;
        }
        let r = a.abs();
        a = b.mod_floor(&r);
        b = r;
    }
}

/// Kronecker symbol (a|n). The pair (0, 0) is undefined.
pub fn kronecker(a: &BigInt, n: &BigInt) -> Result<i32> {
    kronecker_generic(a.clone(), n.clone())
        .ok_or_else(|| Error::domain("kronecker symbol (0|0) is undefined"))
}

/// Kronecker symbol on 128-bit integers.
pub fn kronecker_i128(a: i128, n: i128) -> Result<i32> {
    kronecker_generic(a, n).ok_or_else(|| Error::domain("kronecker symbol (0|0) is undefined"))
}

pub(crate) fn jacobi_big(a: &BigInt, n: &BigInt) -> i32 {
    kronecker_generic(a.clone(), n.clone()).unwrap_or(0)
}

/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks), or `None`
/// for a non-residue. For p = 2 returns a mod 2.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}
