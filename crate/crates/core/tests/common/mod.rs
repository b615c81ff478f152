//! Independent oracles for the integration tests: reduced forms by direct
//! search and invariant factors from element orders.

#![allow(dead_code)]

use quadclass::QForm;

pub fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Primitive reduced forms of discriminant `disc < 0`, straight from the
/// definition.
pub fn reduced_forms(disc: i64) -> Vec<QForm<i128>> {
    let d = disc as i128;
    let mut out = Vec::new();
    let mut a: i128 = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            out.push(QForm::new(a, b, c).unwrap());
        }
        a += 1;
    }
    out
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Order of `f` in a group of order `h`.
pub fn order_in(f: &QForm<i128>, h: u64) -> u64 {
    let mut o = h;
    for p in prime_factors(h) {
        while o % p == 0 && f.pow_u64(o / p).is_principal() {
            o /= p;
        }
    }
    o
}

/// Descending invariant factors of the group whose elements are `forms`.
/// For each prime `p`, the number of elements killed by `p^j` is
/// `p^(sum_i min(j, e_i))`, which pins down the exponents `e_i`.
pub fn invariants_from_elements(forms: &[QForm<i128>]) -> Vec<u64> {
    let h = forms.len() as u64;
    let orders: Vec<u64> = forms.iter().map(|f| order_in(f, h)).collect();
    let mut chain: Vec<u64> = Vec::new();
    for p in prime_factors(h) {
        let valuation = |mut x: u64| {
            let mut v = 0;
            while x % p == 0 {
                x /= p;
                v += 1;
            }
            v
        };
        let vals: Vec<u32> = orders.iter().map(|&o| valuation(o)).collect();
        let top = *vals.iter().max().unwrap();
        let log_count = |j: u32| {
            let n = vals.iter().filter(|&&v| v <= j).count() as u64;
            valuation(n)
        };
        // ranks[j-1] = number of factors with p-part at least p^j
        let ranks: Vec<u32> = (1..=top).map(|j| log_count(j) - log_count(j - 1)).collect();
        let width = ranks.first().copied().unwrap_or(0) as usize;
        if chain.len() < width {
            chain.resize(width, 1);
        }
        for (i, slot) in chain.iter_mut().enumerate().take(width) {
            let e = ranks.iter().filter(|&&r| r as usize > i).count() as u32;
            *slot *= p.pow(e);
        }
    }
    chain
}

pub fn is_fundamental(disc: i64) -> bool {
    let squarefree = |mut n: i64| {
        let mut p = 2;
        while p * p <= n {
            if n % (p * p) == 0 {
                return false;
            }
            if n % p == 0 {
                n /= p;
            }
            p += 1;
        }
        true
    };
    let m = -disc;
    match disc.rem_euclid(4) {
        1 => squarefree(m),
        0 => {
            let k = m / 4;
            (k % 4 == 1 || k % 4 == 2) && squarefree(k)
        }
        _ => false,
    }
}
