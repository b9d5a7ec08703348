//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational used for all series coefficients.
pub type Q = BigRational;

/// Small rational used for symmetry exponents Γ_j, whose denominators divide det E.
pub type Frac = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac_to_q(f: &Frac) -> Q {
    q(*f.numer(), *f.denom())
}

/// Fractional part in [0, 1).
pub fn fract(f: Frac) -> Frac {
    f - f.floor()
}

pub fn floor_i64(f: &Frac) -> i64 {
    f.floor().to_integer()
}

/// Integer value of `x`, if it is one and fits.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn pow_q(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial_q(top: &Q, k: u64) -> Q {
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * (top - qi(i as i64)) / qi(i as i64 + 1);
    }
    acc
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// `p/q` rendering; integers print without a denominator.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn fmt_frac(x: &Frac) -> String {
    x.to_string()
}

pub fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}
