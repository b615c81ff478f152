use num_integer::Integer;

/// All primitive reduced forms `(a, b, c)` of discriminant `disc < 0`,
/// ordered by `(a, b)`. `visit` sees each form once.
pub(crate) fn for_each_reduced_form(disc: i64, mut visit: impl FnMut(i64, i64, i64)) {
    debug_assert!(disc < 0);
    let n = -(disc as i128);
    let parity = disc.rem_euclid(2);
    let mut a: i64 = 1;
    while 3 * (a as i128) * (a as i128) <= n {
        let four_a = 4 * a as i128;
        // b runs over (-a, a] with b = disc (mod 2)
        let mut b = -a + 1;
        if (b - parity).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = (b as i128) * (b as i128) + n;
            if num % four_a == 0 {
                let c = (num / four_a) as i64;
                let keep = c >= a && !(b < 0 && (c == a || -b == a));
                if keep && a.gcd(&b).gcd(&c) == 1 {
                    visit(a, b, c);
                }
            }
            b += 2;
        }
        a += 1;
    }
}

pub(crate) fn count_reduced_forms(disc: i64) -> u64 {
    let mut h = 0;
    for_each_reduced_form(disc, |_, _, _| h += 1);
    h
}
