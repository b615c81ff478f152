//! Positive definite binary quadratic forms `ax^2 + bxy + cy^2` of negative
//! discriminant and their class group arithmetic.

mod compose;
mod int;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::intcore::{self, is_prime_u64, sqrt_mod_prime};

pub use int::{FormInt, SMALL_DISC_LIMIT};

/// A negative discriminant `b^2 - 4ac`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Discriminant {
    value: BigInt,
    fundamental: bool,
}

impl Discriminant {
    /// Validate `value` (negative, 0 or 1 mod 4). Deciding fundamentality
    /// factors `|value|`.
    pub fn new(value: BigInt) -> Result<Self> {
        check_disc_shape(&value)?;
        let fundamental = is_fundamental(&value);
        Ok(Discriminant { value, fundamental })
    }

    pub fn from_i64(value: i64) -> Result<Self> {
        Self::new(BigInt::from(value))
    }

    /// Caller vouches for the fundamental flag.
    pub(crate) fn with_flag(value: BigInt, fundamental: bool) -> Result<Self> {
        check_disc_shape(&value)?;
        Ok(Discriminant { value, fundamental })
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn is_fundamental(&self) -> bool {
        self.fundamental
    }

    pub fn abs(&self) -> BigUint {
        self.value.magnitude().clone()
    }

    /// The value as `i128` when |disc| is below [`SMALL_DISC_LIMIT`].
    pub fn small(&self) -> Option<i128> {
        self.value.to_i128().filter(|v| -*v < SMALL_DISC_LIMIT)
    }

    /// Split as `fundamental * f^2`, returning the fundamental discriminant
    /// and the conductor `f`.
    pub fn fundamental_part(&self) -> (Discriminant, BigUint) {
        if self.fundamental {
            return (self.clone(), BigUint::one());
        }
        let (s, m) = intcore::squarefree_decompose(self.value.magnitude());
        let m = -BigInt::from(m);
        let four = BigInt::from(4);
        let (d0, f) = if m.mod_floor(&four) == BigInt::one() {
            (m, s)
        } else {
            (m * 4, s / 2u32)
        };
        (
            Discriminant {
                value: d0,
                fundamental: true,
            },
            f,
        )
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

fn check_disc_shape(value: &BigInt) -> Result<()> {
    if !value.is_negative() {
        return Err(Error::domain(format!("discriminant {value} is not negative")));
    }
    let r = value.mod_floor(&BigInt::from(4));
    if r > BigInt::one() {
        return Err(Error::domain(format!(
            "discriminant {value} is not 0 or 1 mod 4"
        )));
    }
    Ok(())
}

fn is_fundamental(value: &BigInt) -> bool {
    let four = BigInt::from(4);
    if value.mod_floor(&four) == BigInt::one() {
        return intcore::is_squarefree(value.magnitude());
    }
    let k: BigInt = value / 4;
    let r = k.mod_floor(&four);
    (r == BigInt::from(2) || r == BigInt::from(3)) && intcore::is_squarefree(k.magnitude())
}

/// A primitive positive definite form. Public operations return reduced
/// forms, so equality of forms is equality of classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QForm<T = BigInt> {
    a: T,
    b: T,
    c: T,
}

impl<T: FormInt> QForm<T> {
    /// Build a form, checking definiteness and primitivity. The result is not
    /// reduced; call [`QForm::reduce`] for the class representative.
    pub fn new(a: T, b: T, c: T) -> Result<Self> {
        if !a.is_positive() || !c.is_positive() {
            return Err(Error::domain(format!(
                "({a},{b},{c}) is not positive definite"
            )));
        }
        let f = QForm { a, b, c };
        if !f.discriminant().is_negative() {
            return Err(Error::domain(format!("{f} has non-negative discriminant")));
        }
        if !f.a.gcd(&f.b).gcd(&f.c).is_one() {
            return Err(Error::domain(format!("{f} is not primitive")));
        }
        Ok(f)
    }

    pub(crate) fn from_parts(a: T, b: T, c: T) -> Self {
        QForm { a, b, c }
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn b(&self) -> &T {
        &self.b
    }

    pub fn c(&self) -> &T {
        &self.c
    }

    pub fn discriminant(&self) -> T {
        self.b.clone() * self.b.clone() - T::from_u8(4).unwrap() * self.a.clone() * self.c.clone()
    }

    /// The identity class: `(1, 0, -d/4)` or `(1, 1, (1-d)/4)`.
    pub fn principal(disc: &T) -> Self {
        let four = T::from_u8(4).unwrap();
        if disc.is_even() {
            QForm {
                a: T::one(),
                b: T::zero(),
                c: -(disc.clone() / four),
            }
        } else {
            QForm {
                a: T::one(),
                b: T::one(),
                c: (T::one() - disc.clone()) / four,
            }
        }
    }

    /// For a reduced form, whether it is the identity class.
    pub fn is_principal(&self) -> bool {
        self.a.is_one()
    }

    /// `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.abs();
        if abs_b > self.a || self.a > self.c {
            return false;
        }
        if (abs_b == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    /// The unique reduced form equivalent to `self`.
    pub fn reduce(&self) -> Self {
        let mut f = self.clone();
        f.reduce_in_place();
        f
    }

    pub(crate) fn reduce_in_place(&mut self) {
        self.normalize();
        while self.a > self.c || (self.a == self.c && self.b.is_negative()) {
            std::mem::swap(&mut self.a, &mut self.c);
            self.b = -self.b.clone();
            self.normalize();
        }
    }

    /// Translate `x -> x + ry` so that `-a < b <= a`.
    fn normalize(&mut self) {
        let a = &self.a;
        if -a.clone() < self.b && self.b <= *a {
            return;
        }
        let two_a = a.clone() + a.clone();
        let r = (a.clone() - self.b.clone()).div_floor(&two_a);
        let new_c = (a.clone() * r.clone() + self.b.clone()) * r.clone() + self.c.clone();
        self.b = self.b.clone() + two_a * r;
        self.c = new_c;
    }

    /// Gauss composition of two forms of the same discriminant.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let (d1, d2) = (self.discriminant(), other.discriminant());
        if d1 != d2 {
            return Err(Error::DiscriminantMismatch {
                left: d1.to_string(),
                right: d2.to_string(),
            });
        }
        Ok(self.mul(other))
    }

    /// Composition without the discriminant check.
    pub(crate) fn mul(&self, other: &Self) -> Self {
        compose::compose(self, other)
    }

    pub fn square(&self) -> Self {
        compose::compose(self, self)
    }

    /// The opposite class `(a, -b, c)`, reduced.
    pub fn inverse(&self) -> Self {
        QForm {
            a: self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
        }
        .reduce()
    }

    pub fn pow(&self, k: &BigUint) -> Self {
        let mut acc = QForm::principal(&self.discriminant());
        let base = self.reduce();
        for i in (0..k.bits()).rev() {
            acc = acc.square();
            if k.bit(i) {
                acc = acc.mul(&base);
            }
        }
        acc
    }

    pub fn pow_u64(&self, k: u64) -> Self {
        let mut acc = QForm::principal(&self.discriminant());
        if k == 0 {
            return acc;
        }
        let base = self.reduce();
        for i in (0..64 - k.leading_zeros()).rev() {
            acc = acc.square();
            if (k >> i) & 1 == 1 {
                acc = acc.mul(&base);
            }
        }
        acc
    }

    /// Form `(l, b, c)` for a prime `l` with `0 <= b <= l` and
    /// `b^2 = disc (mod 4l)`, returned reduced. The other root of `disc`
    /// modulo `4l` gives the inverse class.
    pub fn prime_form(disc: &T, ell: u64) -> Result<Self> {
        if !is_prime_u64(ell) {
            return Err(Error::domain(format!("{ell} is not prime")));
        }
        let shape = disc.mod_floor(&T::from_u8(4).unwrap()).to_u8();
        if !disc.is_negative() || !matches!(shape, Some(0 | 1)) {
            return Err(Error::domain(format!("{disc} is not a negative discriminant")));
        }
        let not_rep = || Error::NotRepresentable {
            disc: disc.to_string(),
            prime: ell,
        };
        let ell_t = T::from_u64(ell).unwrap();
        let b = if ell == 2 {
            let r = disc.mod_floor(&T::from_u8(8).unwrap()).to_u64().unwrap();
            (0..=2u64)
                .find(|b| (b * b) % 8 == r)
                .ok_or_else(not_rep)?
        } else {
            let residue = disc.mod_floor(&ell_t).to_u64().unwrap();
            let root = sqrt_mod_prime(residue, ell).ok_or_else(not_rep)?;
            let want_odd = disc.is_odd();
            if (root % 2 == 1) == want_odd {
                root
            } else {
                ell - root
            }
        };
        let b = T::from_u64(b).unwrap();
        let four_ell = T::from_u8(4).unwrap() * ell_t.clone();
        let num = b.clone() * b.clone() - disc.clone();
        debug_assert!(num.is_multiple_of(&four_ell));
        let c = num / four_ell;
        if !ell_t.gcd(&b).gcd(&c).is_one() {
            return Err(not_rep());
        }
        Ok(QForm { a: ell_t, b, c }.reduce())
    }

    /// Change coefficient type; `None` when a coefficient does not fit.
    pub fn convert<U: FormInt>(&self) -> Option<QForm<U>> {
        Some(QForm {
            a: U::from_bigint(&self.a.to_bigint())?,
            b: U::from_bigint(&self.b.to_bigint())?,
            c: U::from_bigint(&self.c.to_bigint())?,
        })
    }

    pub fn to_big(&self) -> QForm<BigInt> {
        QForm {
            a: self.a.to_bigint(),
            b: self.b.to_bigint(),
            c: self.c.to_bigint(),
        }
    }
}

impl<T: FormInt> fmt::Display for QForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl QForm<BigInt> {
    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self> {
        QForm::new(BigInt::from(a), BigInt::from(b), BigInt::from(c))
    }
}

/// Identity of the class group of `disc`.
pub fn principal_form(disc: &Discriminant) -> QForm {
    QForm::principal(disc.value())
}

/// Reduced form of norm `ell` above the prime `ell`.
pub fn prime_form(disc: &Discriminant, ell: u64) -> Result<QForm> {
    QForm::prime_form(disc.value(), ell)
}
