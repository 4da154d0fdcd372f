use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// An exact nonnegative rational `numerator / 4^scale`.
///
/// Always kept canonical: the numerator is not divisible by 4 unless the
/// scale is 0. Addition and comparison never round.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Base4Fixed {
    numerator: BigUint,
    scale: u32,
}

impl Base4Fixed {
    pub fn zero() -> Self {
        Base4Fixed::default()
    }

    pub fn one() -> Self {
        Base4Fixed::from_integer(1u32)
    }

    pub fn from_integer(n: impl Into<BigUint>) -> Self {
        Base4Fixed {
            numerator: n.into(),
            scale: 0,
        }
    }

    /// `4^-k`.
    pub fn pow4_neg(k: u32) -> Self {
        Base4Fixed {
            numerator: BigUint::one(),
            scale: k,
        }
    }

    /// `numerator / 4^scale`, reduced.
    pub fn new(numerator: BigUint, scale: u32) -> Self {
        let mut v = Base4Fixed { numerator, scale };
        v.normalize();
        v
    }

    /// `sum_k counts[k] * 4^-k`.
    pub fn from_histogram(counts: &[u64]) -> Self {
        let Some(scale) = counts.iter().rposition(|&c| c != 0) else {
            return Base4Fixed::zero();
        };
        let mut numerator = BigUint::zero();
        for (k, &c) in counts.iter().enumerate().take(scale + 1) {
            if c != 0 {
                numerator += BigUint::from(c) << (2 * (scale - k));
            }
        }
        Base4Fixed::new(numerator, scale as u32)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.scale = 0;
            return;
        }
        let twos = self.numerator.trailing_zeros().unwrap_or(0);
        let drop = (twos / 2).min(self.scale as u64);
        self.numerator >>= 2 * drop;
        self.scale -= drop as u32;
    }

    /// Numerator rescaled to `4^scale` with `scale >= self.scale`.
    fn at_scale(&self, scale: u32) -> BigUint {
        &self.numerator << (2 * (scale - self.scale) as u64)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.numerator.bits();
        // Keep the top 64 bits so huge numerators don't overflow to inf.
        let shift = bits.saturating_sub(64);
        let top = (&self.numerator >> shift).to_f64().unwrap_or(f64::INFINITY);
        top * 2f64.powi(shift as i32 - 2 * self.scale as i32)
    }

    /// Decimal expansion truncated to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let denominator = BigUint::one() << (2 * self.scale as u64);
        let (int_part, rem) = self.numerator.div_rem(&denominator);
        if digits == 0 {
            return int_part.to_string();
        }
        let frac = (rem * BigUint::from(10u32).pow(digits as u32)) / denominator;
        format!("{int_part}.{frac:0>digits$}")
    }
}

impl fmt::Display for Base4Fixed {
    /// `numerator/4^scale`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/4^{}", self.numerator, self.scale)
    }
}

impl serde::Serialize for Base4Fixed {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Ord for Base4Fixed {
    fn cmp(&self, other: &Self) -> Ordering {
        let scale = self.scale.max(other.scale);
        self.at_scale(scale).cmp(&other.at_scale(scale))
    }
}

impl PartialOrd for Base4Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Base4Fixed> for &Base4Fixed {
    type Output = Base4Fixed;

    fn add(self, rhs: &Base4Fixed) -> Base4Fixed {
        let scale = self.scale.max(rhs.scale);
        Base4Fixed::new(self.at_scale(scale) + rhs.at_scale(scale), scale)
    }
}

impl Add for Base4Fixed {
    type Output = Base4Fixed;

    fn add(self, rhs: Base4Fixed) -> Base4Fixed {
        &self + &rhs
    }
}

impl AddAssign<&Base4Fixed> for Base4Fixed {
    fn add_assign(&mut self, rhs: &Base4Fixed) {
        if rhs.scale <= self.scale {
            self.numerator += rhs.at_scale(self.scale);
        } else {
            self.numerator = self.at_scale(rhs.scale) + &rhs.numerator;
            self.scale = rhs.scale;
        }
        self.normalize();
    }
}

impl Sum for Base4Fixed {
    fn sum<I: Iterator<Item = Base4Fixed>>(iter: I) -> Self {
        iter.fold(Base4Fixed::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        let v = Base4Fixed::new(BigUint::from(16u32), 3);
        assert_eq!((v.numerator().clone(), v.scale()), (BigUint::one(), 1));
        let v = Base4Fixed::new(BigUint::from(8u32), 2);
        assert_eq!((v.numerator().clone(), v.scale()), (BigUint::from(2u32), 1));
        let v = Base4Fixed::new(BigUint::from(64u32), 0);
        assert_eq!(v.scale(), 0);
        assert_eq!(Base4Fixed::new(BigUint::zero(), 9), Base4Fixed::zero());
    }

    #[test]
    fn display_and_decimal() {
        let quarter = Base4Fixed::pow4_neg(1);
        assert_eq!(quarter.to_string(), "1/4^1");
        assert_eq!(quarter.to_decimal(3), "0.250");
        let v = Base4Fixed::from_histogram(&[0, 1, 1, 2]);
        assert_eq!(v.to_string(), "22/4^3");
        assert_eq!(v.to_decimal(6), "0.343750");
        assert_eq!(Base4Fixed::from_integer(2u32).to_decimal(2), "2.00");
    }

    #[test]
    fn to_f64_handles_wide_numerators() {
        let v = Base4Fixed::new((BigUint::one() << 3000u32) + 1u32, 1500);
        assert!((v.to_f64() - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn addition_is_exact_and_order_free(terms in prop::collection::vec((0u64..1000, 0u32..40), 0..40)) {
            let values: Vec<Base4Fixed> = terms
                .iter()
                .map(|&(n, s)| Base4Fixed::new(BigUint::from(n), s))
                .collect();
            let forward: Base4Fixed = values.iter().cloned().sum();
            let backward: Base4Fixed = values.iter().rev().cloned().sum();
            prop_assert_eq!(&forward, &backward);
            // Rational check: multiply through by 4^40.
            let expected: BigUint = terms
                .iter()
                .map(|&(n, s)| BigUint::from(n) << (2 * (40 - s)))
                .sum();
            prop_assert_eq!(forward.at_scale(40), expected);
        }

        #[test]
        fn order_matches_rationals(a in 0u64..10_000, sa in 0u32..8, b in 0u64..10_000, sb in 0u32..8) {
            let x = Base4Fixed::new(BigUint::from(a), sa);
            let y = Base4Fixed::new(BigUint::from(b), sb);
            // a / 4^sa vs b / 4^sb  <=>  a 4^sb vs b 4^sa
            let lhs = a as u128 * 4u128.pow(sb);
            let rhs = b as u128 * 4u128.pow(sa);
            prop_assert_eq!(x.cmp(&y), lhs.cmp(&rhs));
        }
    }
}
