//! The GIM function `g`, its summatory function `G`, and closed-form bounds.
//!
//! `g` is the completely additive function with `g(1) = 0` and
//! `g(p(k)) = 1 + g(k)`; `g(n)` is the edge count of `tau(n)`.
//!
//! Two independent routes compute it: [`Gim::g`] recurses through the prime
//! backend's factorizer and prime index, and [`GimTable`] fills a whole range
//! from a smallest-prime-factor sieve.
//!
//! Bound checks compare in `f64` first. When the two sides agree to within a
//! relative `1e-12`, the comparison is redone exactly (integer powers) or,
//! where no integer identity exists, in 256-bit fixed point.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixed_ln::{self, FRAC_BITS};
use crate::primes::PrimeBackend;

/// Relative width of the band inside which float comparisons are not trusted.
pub const GUARD_BAND: f64 = 1e-12;

/// Largest table the library will try to allocate.
pub const MAX_TABLE_LIMIT: u64 = 1 << 32;

const DEFAULT_CACHE_CAPACITY: usize = 1 << 16;

/// Recursive evaluator of `g` with a bounded memo.
pub struct Gim<'a> {
    backend: &'a PrimeBackend,
    cache: Mutex<HashMap<BigUint, u64>>,
    capacity: usize,
}

impl<'a> Gim<'a> {
    pub fn new(backend: &'a PrimeBackend) -> Self {
        Gim::with_capacity(backend, DEFAULT_CACHE_CAPACITY)
    }

    pub fn with_capacity(backend: &'a PrimeBackend, capacity: usize) -> Self {
        Gim {
            backend,
            cache: Mutex::new(HashMap::new()),
            capacity,
        }
    }

    pub fn g(&self, n: &BigUint) -> Result<u64> {
        if n.is_zero() {
            return Err(Error::Domain("g is defined for n >= 1".into()));
        }
        if n.is_one() {
            return Ok(0);
        }
        if let Some(&v) = self.lock().get(n) {
            return Ok(v);
        }
        let mut total = 0;
        for f in self.backend.factorize(n)? {
            let k = self.backend.prime_index(&f)?;
            total += 1 + self.g(&BigUint::from(k))?;
        }
        let mut cache = self.lock();
        if cache.len() >= self.capacity {
            cache.clear();
        }
        cache.insert(n.clone(), total);
        Ok(total)
    }

    pub fn g_u64(&self, n: u64) -> Result<u64> {
        self.g(&BigUint::from(n))
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HashMap<BigUint, u64>> {
        self.cache.lock().unwrap_or_else(|e| e.into_inner())
    }
}

/// `g(n)` through a throwaway evaluator.
pub fn g(n: &BigUint, backend: &PrimeBackend) -> Result<u64> {
    Gim::new(backend).g(n)
}

/// `g` for every `n <= limit`, built with a linear smallest-prime-factor
/// sieve. Since `g(n) <= 3 log_5 n`, a byte per entry suffices for any
/// limit the table accepts.
#[derive(Debug, Clone)]
pub struct GimTable {
    limit: u64,
    g_values: Vec<u8>,
    spf: Vec<u32>,
}

impl GimTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::Domain("table limit must be at least 1".into()));
        }
        if limit > MAX_TABLE_LIMIT {
            return Err(Error::Capacity(format!(
                "table limit {limit} exceeds {MAX_TABLE_LIMIT}"
            )));
        }
        let len = limit as usize + 1;
        let mut g_values: Vec<u8> = Vec::new();
        let mut spf: Vec<u32> = Vec::new();
        g_values
            .try_reserve_exact(len)
            .and_then(|_| spf.try_reserve_exact(len))
            .map_err(|e| Error::Capacity(format!("table of {limit} entries: {e}")))?;
        g_values.resize(len, 0);
        spf.resize(len, 0);
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
                // pi(i) < i, so its entry is already final.
                g_values[i] = 1 + g_values[primes.len()];
            } else {
                let p = spf[i] as usize;
                g_values[i] = g_values[p] + g_values[i / p];
            }
            let smallest = spf[i];
            for &p in &primes {
                let m = i as u64 * p as u64;
                if p > smallest || m > limit {
                    break;
                }
                spf[m as usize] = p;
            }
        }
        Ok(GimTable {
            limit,
            g_values,
            spf,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `g(n)`, or `None` outside `1..=limit`.
    pub fn get(&self, n: u64) -> Option<u64> {
        if n == 0 || n > self.limit {
            return None;
        }
        Some(self.g_values[n as usize] as u64)
    }

    /// `g(1), g(2), ..., g(limit)`.
    pub fn values(&self) -> &[u8] {
        &self.g_values[1..]
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        (2..=self.limit)
            .contains(&n)
            .then(|| self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.smallest_prime_factor(n) == Some(n)
    }

    /// Primes up to `limit`, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit).filter(|&n| self.spf[n as usize] as u64 == n)
    }

    /// `G(n) = g(1) + ... + g(n)`.
    pub fn big_g(&self, n: u64) -> Option<u64> {
        (n >= 1 && n <= self.limit).then(|| {
            self.g_values[1..=n as usize]
                .iter()
                .map(|&v| v as u64)
                .sum()
        })
    }

    /// `G(1), ..., G(limit)`.
    pub fn cumulative(&self) -> Vec<u64> {
        self.values()
            .iter()
            .scan(0u64, |acc, &v| {
                *acc += v as u64;
                Some(*acc)
            })
            .collect()
    }
}

pub fn g_table(limit: u64) -> Result<GimTable> {
    GimTable::new(limit)
}

/// `G(n)`.
pub fn big_g(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("G is defined for n >= 1".into()));
    }
    Ok(GimTable::new(n)?.big_g(n).expect("n is within the table"))
}

fn require_bound_range(n: u64) -> Result<()> {
    if n < 7 {
        Err(Error::Domain(format!(
            "the bounds on g hold for n >= 7, got n = {n}"
        )))
    } else {
        Ok(())
    }
}

/// `ln n / ln ln n`, for `n >= 7`.
pub fn lower_bound(n: u64) -> Result<f64> {
    require_bound_range(n)?;
    let ln = (n as f64).ln();
    Ok(ln / ln.ln())
}

/// `3 ln n / ln 5`, for `n >= 7`.
pub fn upper_bound(n: u64) -> Result<f64> {
    require_bound_range(n)?;
    Ok(3.0 * (n as f64).ln() / 5f64.ln())
}

/// `n ln n / ln 4`.
pub fn shannon_floor(n: u64) -> f64 {
    let n = n as f64;
    n * n.ln() / 4f64.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundOutcome {
    /// The inequality holds strictly.
    Holds,
    /// Both sides are equal; only reported after an exact re-check.
    Equal,
    Violated,
}

impl BoundOutcome {
    pub fn passes(self) -> bool {
        self != BoundOutcome::Violated
    }
}

/// Classifies `small <= large` in floating point, or `None` when the gap
/// sits inside the guard band.
fn float_verdict(small: f64, large: f64) -> Option<BoundOutcome> {
    let band = GUARD_BAND * small.abs().max(large.abs()).max(1.0);
    let gap = large - small;
    if gap > band {
        Some(BoundOutcome::Holds)
    } else if gap < -band {
        Some(BoundOutcome::Violated)
    } else {
        None
    }
}

fn exact_verdict(small: &BigUint, large: &BigUint) -> BoundOutcome {
    match small.cmp(large) {
        std::cmp::Ordering::Less => BoundOutcome::Holds,
        std::cmp::Ordering::Equal => BoundOutcome::Equal,
        std::cmp::Ordering::Greater => BoundOutcome::Violated,
    }
}

/// `g <= 3 ln n / ln 5`. Escalates to `5^g <= n^3`.
pub fn check_upper_bound(n: u64, g: u64) -> Result<BoundOutcome> {
    let upper = upper_bound(n)?;
    Ok(float_verdict(g as f64, upper).unwrap_or_else(|| {
        exact_verdict(&BigUint::from(5u32).pow(g as u32), &BigUint::from(n).pow(3))
    }))
}

/// `ln n / ln ln n <= g`. Escalates to `ln n <= g ln ln n` in fixed point;
/// a gap under the fixed-point error bound is reported as `Equal`.
pub fn check_lower_bound(n: u64, g: u64) -> Result<BoundOutcome> {
    let lower = lower_bound(n)?;
    Ok(float_verdict(lower, g as f64).unwrap_or_else(|| {
        let ln_n = fixed_ln::ln_fixed(&(BigUint::from(n) << FRAC_BITS));
        let ln_n_u = fixed_ln::to_unsigned(&ln_n).expect("n >= 7");
        let ln_ln_n = fixed_ln::ln_fixed(&ln_n_u);
        let gap: BigInt = ln_ln_n * BigInt::from(g) - ln_n;
        let tolerance = BigInt::from(g + 2) << fixed_ln::ERROR_BOUND_BITS;
        if gap > tolerance {
            BoundOutcome::Holds
        } else if gap < -tolerance {
            BoundOutcome::Violated
        } else {
            BoundOutcome::Equal
        }
    }))
}

/// `n ln n / ln 4 <= G`. Escalates to `n^n <= 4^G`, which is the same
/// inequality with both sides exponentiated.
pub fn check_shannon_floor(n: u64, big_g: u64) -> BoundOutcome {
    if n == 0 {
        return BoundOutcome::Holds;
    }
    float_verdict(shannon_floor(n), big_g as f64).unwrap_or_else(|| {
        let lhs = BigUint::from(n).pow(n as u32);
        let rhs = BigUint::one() << (2 * big_g);
        exact_verdict(&lhs, &rhs)
    })
}

/// A failed bound check with the value that broke it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundWitness {
    pub n: u64,
    pub g: u64,
    pub side: &'static str,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub from: u64,
    pub to: u64,
    pub checked: u64,
    /// Values of `n` where `g(n)` equals the upper bound exactly.
    pub upper_equalities: Vec<u64>,
    pub lower_equalities: Vec<u64>,
    pub min_lower_slack: f64,
    pub min_lower_slack_at: u64,
    pub min_upper_slack: f64,
    pub min_upper_slack_at: u64,
    pub violations: Vec<BoundWitness>,
}

impl SandwichReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `lower_bound(n) <= g(n) <= upper_bound(n)` for `n` in
/// `from.max(7)..=to`.
pub fn verify_sandwich(table: &GimTable, from: u64, to: u64) -> Result<SandwichReport> {
    if to > table.limit() {
        return Err(Error::Capacity(format!(
            "sandwich range ends at {to}, table covers {}",
            table.limit()
        )));
    }
    let from = from.max(7);
    let mut report = SandwichReport {
        from,
        to,
        checked: 0,
        upper_equalities: Vec::new(),
        lower_equalities: Vec::new(),
        min_lower_slack: f64::INFINITY,
        min_lower_slack_at: 0,
        min_upper_slack: f64::INFINITY,
        min_upper_slack_at: 0,
        violations: Vec::new(),
    };
    for n in from..=to {
        let g = table.get(n).expect("within table");
        let lower = lower_bound(n)?;
        let upper = upper_bound(n)?;
        let lower_slack = g as f64 - lower;
        let upper_slack = upper - g as f64;
        if lower_slack < report.min_lower_slack {
            report.min_lower_slack = lower_slack;
            report.min_lower_slack_at = n;
        }
        if upper_slack < report.min_upper_slack {
            report.min_upper_slack = upper_slack;
            report.min_upper_slack_at = n;
        }
        match check_lower_bound(n, g)? {
            BoundOutcome::Holds => {}
            BoundOutcome::Equal => report.lower_equalities.push(n),
            BoundOutcome::Violated => report.violations.push(BoundWitness {
                n,
                g,
                side: "lower",
                bound: lower,
            }),
        }
        match check_upper_bound(n, g)? {
            BoundOutcome::Holds => {}
            BoundOutcome::Equal => report.upper_equalities.push(n),
            BoundOutcome::Violated => report.violations.push(BoundWitness {
                n,
                g,
                side: "upper",
                bound: upper,
            }),
        }
        report.checked += 1;
    }
    Ok(report)
}

/// Least-squares slope of `G(n)` against `n ln n` over the table, a rough
/// trend for the constant in `G(n) ~ phi n ln n`. Not a verified quantity.
pub fn phi_trend(table: &GimTable, checkpoints: &[u64]) -> Vec<(u64, f64)> {
    let cumulative = table.cumulative();
    checkpoints
        .iter()
        .filter(|&&n| n >= 2 && n <= table.limit())
        .map(|&n| {
            let big = cumulative[n as usize - 1] as f64;
            (n, big / (n as f64 * (n as f64).ln()))
        })
        .collect()
}
