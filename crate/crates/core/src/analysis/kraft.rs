//! Exact Kraft sums of `4^-g` over primes and over all naturals.

use num_bigint::BigUint;
use serde::Serialize;

use super::Base4Fixed;
use crate::error::{Error, Result};
use crate::gim::GimTable;

fn require_table(table: &GimTable, limit: u64) -> Result<()> {
    if limit > table.limit() {
        return Err(Error::Capacity(format!(
            "limit {limit} exceeds the g table ({})",
            table.limit()
        )));
    }
    Ok(())
}

/// Counts of `g` values, `hist[k] = #{n : g(n) = k}` over the selected `n`.
fn histogram(table: &GimTable, limit: u64, primes_only: bool) -> Vec<u64> {
    let mut hist = Vec::new();
    for n in 1..=limit {
        if primes_only && !table.is_prime(n) {
            continue;
        }
        let g = table.get(n).expect("n within table") as usize;
        if hist.len() <= g {
            hist.resize(g + 1, 0);
        }
        hist[g] += 1;
    }
    hist
}

/// `sum_{p <= limit} 4^-g(p)` over primes, exactly.
pub fn kraft_sum_primes_in(table: &GimTable, limit: u64) -> Result<Base4Fixed> {
    if limit < 2 {
        return Err(Error::Domain("prime Kraft sum needs limit >= 2".into()));
    }
    require_table(table, limit)?;
    Ok(Base4Fixed::from_histogram(&histogram(table, limit, true)))
}

/// `sum_{n <= limit} 4^-g(n)`, exactly.
pub fn kraft_sum_naturals_in(table: &GimTable, limit: u64) -> Result<Base4Fixed> {
    if limit < 1 {
        return Err(Error::Domain("Kraft sum needs limit >= 1".into()));
    }
    require_table(table, limit)?;
    Ok(Base4Fixed::from_histogram(&histogram(table, limit, false)))
}

pub fn kraft_sum_primes(limit: u64) -> Result<Base4Fixed> {
    kraft_sum_primes_in(&GimTable::new(limit.max(2))?, limit)
}

pub fn kraft_sum_naturals(limit: u64) -> Result<Base4Fixed> {
    kraft_sum_naturals_in(&GimTable::new(limit.max(1))?, limit)
}

/// `prod_{p <= limit} (1 - 4^-g(p))^-1`. Since `4^-g` is completely
/// multiplicative this product dominates every partial sum over
/// `n <= limit` and increases toward the full sum over the naturals.
pub fn euler_product_estimate_in(table: &GimTable, limit: u64) -> Result<f64> {
    if limit < 2 {
        return Err(Error::Domain("Euler product needs limit >= 2".into()));
    }
    require_table(table, limit)?;
    let hist = histogram(table, limit, true);
    // log of the product = -sum count_k ln(1 - 4^-k)
    let log: f64 = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| -(c as f64) * (-(0.25f64.powi(k as i32))).ln_1p())
        .sum();
    Ok(log.exp())
}

pub fn euler_product_estimate(limit: u64) -> Result<f64> {
    euler_product_estimate_in(&GimTable::new(limit.max(2))?, limit)
}

/// Outcome of sweeping the prime Kraft sum one prime at a time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeKraftSweep {
    pub limit: u64,
    /// Number of partial sums inspected: one per prime.
    pub checkpoints: u64,
    pub value: Base4Fixed,
    /// Every new prime strictly increases the partial sum.
    pub strictly_increasing: bool,
    /// The sum is exactly 1/4 after p = 2 and strictly above 1/4 after.
    pub above_quarter: bool,
    /// Every partial sum is strictly below 1/2.
    pub below_half: bool,
    /// First prime at which any of the above failed.
    pub first_failure: Option<u64>,
}

impl PrimeKraftSweep {
    pub fn passes(&self) -> bool {
        self.strictly_increasing && self.above_quarter && self.below_half
    }
}

/// Walks the primes up to `limit` in ascending order, maintaining the
/// exact partial sum and checking it after every prime.
pub fn sweep_prime_kraft(table: &GimTable, limit: u64) -> Result<PrimeKraftSweep> {
    if limit < 2 {
        return Err(Error::Domain("prime Kraft sweep needs limit >= 2".into()));
    }
    require_table(table, limit)?;
    // One common scale for all partial sums, so they compare as integers.
    let scale = table
        .primes()
        .take_while(|&p| p <= limit)
        .map(|p| table.get(p).expect("within table"))
        .max()
        .unwrap_or(0) as u32;
    let unit = |k: u64| BigUint::from(1u32) << (2 * (scale as u64 - k));
    let quarter = unit(1);
    let half = &quarter << 1u32;

    let mut sweep = PrimeKraftSweep {
        limit,
        checkpoints: 0,
        value: Base4Fixed::zero(),
        strictly_increasing: true,
        above_quarter: true,
        below_half: true,
        first_failure: None,
    };
    let mut partial = BigUint::ZERO;
    for p in table.primes().take_while(|&p| p <= limit) {
        let term = unit(table.get(p).expect("within table"));
        let previous = partial.clone();
        partial += term;
        sweep.checkpoints += 1;
        let increasing = partial > previous;
        let quarter_ok = if p == 2 {
            partial == quarter
        } else {
            partial > quarter
        };
        let half_ok = partial < half;
        sweep.strictly_increasing &= increasing;
        sweep.above_quarter &= quarter_ok;
        sweep.below_half &= half_ok;
        if !(increasing && quarter_ok && half_ok) && sweep.first_failure.is_none() {
            sweep.first_failure = Some(p);
        }
    }
    sweep.value = Base4Fixed::new(partial, scale);
    Ok(sweep)
}

/// The naturals' Kraft sum next to the Euler product and the primes' sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaturalKraftReport {
    pub limit: u64,
    pub naturals: Base4Fixed,
    pub primes: Base4Fixed,
    pub euler_product: f64,
    pub naturals_below_two: bool,
    pub euler_below_two: bool,
    /// The partial sum never exceeds the product over the same primes.
    pub consistent: bool,
}

impl NaturalKraftReport {
    pub fn passes(&self) -> bool {
        self.naturals_below_two && self.euler_below_two && self.consistent
    }
}

/// Slack allowed when comparing the exact partial sum with the `f64` product.
pub const EULER_CONSISTENCY_EPS: f64 = 1e-9;

pub fn verify_natural_kraft(table: &GimTable, limit: u64) -> Result<NaturalKraftReport> {
    let limit = limit.max(2);
    let naturals = kraft_sum_naturals_in(table, limit)?;
    let primes = kraft_sum_primes_in(table, limit)?;
    let euler_product = euler_product_estimate_in(table, limit)?;
    let two = Base4Fixed::from_integer(2u32);
    Ok(NaturalKraftReport {
        limit,
        naturals_below_two: naturals < two,
        euler_below_two: euler_product < 2.0,
        consistent: naturals.to_f64() <= euler_product + EULER_CONSISTENCY_EPS,
        naturals,
        primes,
        euler_product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(num: u32, scale: u32) -> Base4Fixed {
        Base4Fixed::new(BigUint::from(num), scale)
    }

    #[test]
    fn prime_sum_examples() {
        assert_eq!(kraft_sum_primes(2).unwrap(), frac(1, 1));
        // 1/4 + 1/16 + 1/64 + 1/64 = 22/64 = 11/32
        let v = kraft_sum_primes(7).unwrap();
        assert_eq!(v, frac(22, 3));
        assert_eq!(v.to_string(), "22/4^3");
        assert!(kraft_sum_primes(1).is_err());
    }

    #[test]
    fn natural_sum_examples() {
        assert_eq!(kraft_sum_naturals(1).unwrap(), Base4Fixed::one());
        // 1 + 1/4 + 1/16 + 1/16 = 11/8 = 88/64
        assert_eq!(kraft_sum_naturals(4).unwrap(), frac(88, 3));
    }

    #[test]
    fn euler_examples() {
        assert!((euler_product_estimate(2).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((euler_product_estimate(3).unwrap() - 64.0 / 45.0).abs() < 1e-15);
        assert!(euler_product_estimate(100_000).unwrap() < 2.0);
    }

    #[test]
    fn termwise_and_histogram_sums_agree() {
        let table = GimTable::new(20_000).unwrap();
        let terms: Vec<Base4Fixed> = (1..=20_000u64)
            .map(|n| Base4Fixed::pow4_neg(table.get(n).unwrap() as u32))
            .collect();
        let ascending: Base4Fixed = terms.iter().cloned().sum();
        let descending: Base4Fixed = terms.iter().rev().cloned().sum();
        assert_eq!(ascending, descending);
        assert_eq!(ascending, kraft_sum_naturals_in(&table, 20_000).unwrap());
    }

    #[test]
    fn monotone_in_limit() {
        let table = GimTable::new(5000).unwrap();
        let mut previous = Base4Fixed::zero();
        for limit in (2..=5000).step_by(97) {
            let v = kraft_sum_primes_in(&table, limit).unwrap();
            assert!(v >= previous);
            previous = v;
        }
    }

    #[test]
    fn sweep_small() {
        let table = GimTable::new(7).unwrap();
        let s = sweep_prime_kraft(&table, 7).unwrap();
        assert!(s.passes());
        assert_eq!(s.checkpoints, 4);
        assert_eq!(s.value, frac(22, 3));
        let s = sweep_prime_kraft(&table, 2).unwrap();
        assert!(s.passes());
        assert_eq!(s.value, frac(1, 1));
    }

    #[test]
    fn natural_report_small() {
        let table = GimTable::new(10_000).unwrap();
        let r = verify_natural_kraft(&table, 10_000).unwrap();
        assert!(r.passes());
        assert!(r.naturals > Base4Fixed::one());
    }
}
