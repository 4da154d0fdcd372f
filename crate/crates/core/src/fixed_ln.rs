//! Natural logarithm on binary fixed-point big integers.
//!
//! A value `x` stands for `x / 2^FRAC_BITS`. Each result is within
//! [`ERROR_BOUND_BITS`] ulps of the true logarithm, far below anything an
//! `f64` comparison can resolve.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

pub(crate) const FRAC_BITS: u32 = 256;
/// Results are accurate to `2^(ERROR_BOUND_BITS - FRAC_BITS)`.
pub(crate) const ERROR_BOUND_BITS: u32 = 32;

pub(crate) fn fixed_one() -> BigUint {
    BigUint::one() << FRAC_BITS
}

/// `atanh(z)` for fixed-point `0 <= z < 1/2`.
fn atanh_small(z: &BigUint) -> BigUint {
    let z2 = (z * z) >> FRAC_BITS;
    let mut power = z.clone();
    let mut sum = BigUint::zero();
    let mut k = 1u32;
    while !power.is_zero() {
        sum += &power / k;
        power = (&power * &z2) >> FRAC_BITS;
        k += 2;
    }
    sum
}

fn ln2() -> BigUint {
    // ln 2 = 2 atanh(1/3)
    atanh_small(&(fixed_one() / 3u32)) << 1
}

/// `ln(x / 2^FRAC_BITS)` as signed fixed point. `x` must be positive.
pub(crate) fn ln_fixed(x: &BigUint) -> BigInt {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits() as i64;
    let exponent = bits - 1 - FRAC_BITS as i64;
    // Mantissa in [1, 2).
    let mantissa = if exponent >= 0 {
        x >> exponent as u64
    } else {
        x << (-exponent) as u64
    };
    let one = fixed_one();
    let z = ((&mantissa - &one) << FRAC_BITS) / (&mantissa + &one);
    let ln_m = BigInt::from(atanh_small(&z) << 1);
    let k_ln2 = BigInt::from(ln2()) * exponent;
    ln_m + k_ln2
}

pub(crate) fn to_unsigned(v: &BigInt) -> Option<BigUint> {
    match v.sign() {
        Sign::Minus => None,
        _ => Some(v.magnitude().clone()),
    }
}
