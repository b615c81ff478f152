
use super::{FormInt, QForm};

/// `(g, x, y)` with `x*a + y*b = g = gcd(a, b) >= 0`.
fn xgcd<T: FormInt>(a: &T, b: &T) -> (T, T, T) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = s0 - q.clone() * s1.clone();
        s0 = std::mem::replace(&mut s1, s);
        let t = t0 - q * t1.clone();
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Shanks' composition of primitive forms followed by reduction.
pub(super) fn compose<T: FormInt>(f1: &QForm<T>, f2: &QForm<T>) -> QForm<T> {
    let (f1, f2) = if f1.a > f2.a { (f2, f1) } else { (f1, f2) };
    let two = T::one() + T::one();
    let s = (f1.b.clone() + f2.b.clone()) / two.clone();
    let n = f2.b.clone() - s.clone();

    let (d, y1) = if f2.a.is_multiple_of(&f1.a) {
        (f1.a.clone(), T::zero())
    } else {
        let (d, u, _v) = xgcd(&f2.a, &f1.a);
        (d, u)
    };

    let (d1, x2, y2) = if s.is_multiple_of(&d) {
        (d, T::zero(), -T::one())
    } else {
        let (d1, x2, y2) = xgcd(&s, &d);
        (d1, x2, -y2)
    };

    let v1 = f1.a.clone() / d1.clone();
    let v2 = f2.a.clone() / d1.clone();
    let r = (y1 * y2 * n - x2 * f2.c.clone()).mod_floor(&v1);
    let b3 = f2.b.clone() + two * v2.clone() * r.clone();
    let a3 = v1.clone() * v2.clone();
    let c3 = (f2.c.clone() * d1 + r.clone() * (f2.b.clone() + v2 * r)) / v1;
    let mut out = QForm { a: a3, b: b3, c: c3 };
    out.reduce_in_place();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    #[test]
    fn xgcd_identity() {
        for a in -30i128..30 {
            for b in -30i128..30 {
                let (g, x, y) = xgcd(&a, &b);
                assert_eq!(x * a + y * b, g);
                assert_eq!(g, a.gcd(&b));
            }
        }
    }
}
