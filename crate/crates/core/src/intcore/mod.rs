//! Exact integer services: primality, factorisation, squarefree
//! decomposition, square detection and the Kronecker symbol.

mod factor;
mod kronecker;
mod prime;

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub use factor::{factor_big, factor_u64, TRIAL_DIVISION_BOUND};
pub use kronecker::{kronecker, kronecker_i128, sqrt_mod_prime};
pub use prime::{is_prime, is_prime_u64, primes_up_to};

/// A positive integer together with its prime factorisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// (prime, exponent) pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    /// Product of prime powers; equals `value()`.
    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }
}

/// Factor `n >= 1`. The factorisation of 1 is empty.
pub fn factor(n: &BigUint) -> Factorization {
    assert!(!n.is_zero(), "cannot factor zero");
    Factorization {
        value: n.clone(),
        factors: factor_big(n),
    }
}

/// Write `n = s^2 * d` with `d` squarefree.
pub fn squarefree_decompose(n: &BigUint) -> (BigUint, BigUint) {
    squarefree_from_factors(factor(n).factors())
}

pub(crate) fn squarefree_from_factors(factors: &[(BigUint, u32)]) -> (BigUint, BigUint) {
    let mut s = BigUint::one();
    let mut d = BigUint::one();
    for (p, e) in factors {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
    }
    (s, d)
}

pub fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// True if no prime square divides `n`.
pub fn is_squarefree(n: &BigUint) -> bool {
    factor(n).factors().iter().all(|(_, e)| *e == 1)
}
