use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Coefficient ring for forms. `i128` serves discriminants below
/// [`SMALL_DISC_LIMIT`]; everything else runs on `BigInt`.
pub trait FormInt:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(v: &BigInt) -> Option<Self>;
}

/// Largest |disc| handled with `i128` coefficients. Composition of reduced
/// forms keeps every intermediate below |disc|^2, well inside 127 bits.
pub const SMALL_DISC_LIMIT: i128 = 1 << 60;

impl FormInt for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
}

impl FormInt for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}
