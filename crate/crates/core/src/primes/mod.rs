//! Prime backend: nth prime, prime index, prime counting, primality and
//! factorization.
//!
//! The backend holds an ascending table of every prime up to its current
//! sieve limit. Lookups past the limit grow the table by doubling until the
//! configured hard ceiling; anything beyond the ceiling is an
//! [`Error::IndexOverflow`], which is recoverable.
//!
//! A backend can be shared across threads. Reads take a shared lock; growth
//! takes the exclusive lock, so concurrent growth is serialized. Call
//! [`PrimeBackend::ensure_limit`] up front to avoid growth on hot paths.

mod factor;
mod sieve;

use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use factor::PROBABLE_PRIME_ROUNDS;

pub const DEFAULT_SIEVE_LIMIT: u64 = 1 << 24;
pub const DEFAULT_HARD_CEILING: u64 = 1 << 32;
/// Primes are stored as `u32`, which caps the ceiling.
pub const MAX_HARD_CEILING: u64 = 1 << 32;

/// Trial division bound used before falling back to rho.
const TRIAL_BOUND: u32 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackendConfig {
    pub sieve_limit: u64,
    pub hard_ceiling: u64,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            sieve_limit: DEFAULT_SIEVE_LIMIT,
            hard_ceiling: DEFAULT_HARD_CEILING,
        }
    }
}

impl BackendConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sieve_limit < 2 {
            return Err(Error::Config(format!(
                "sieve limit {} must be at least 2",
                self.sieve_limit
            )));
        }
        if self.sieve_limit > self.hard_ceiling {
            return Err(Error::Config(format!(
                "sieve limit {} exceeds hard ceiling {}",
                self.sieve_limit, self.hard_ceiling
            )));
        }
        if self.hard_ceiling > MAX_HARD_CEILING {
            return Err(Error::Config(format!(
                "hard ceiling {} exceeds the supported maximum 2^32",
                self.hard_ceiling
            )));
        }
        Ok(())
    }
}

#[derive(Debug)]
struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
}

impl PrimeTable {
    fn extend_to(&mut self, new_limit: u64) {
        if new_limit <= self.limit {
            return;
        }
        sieve::sieve_range(self.limit, new_limit, &mut self.primes);
        self.limit = new_limit;
    }
}

#[derive(Debug)]
pub struct PrimeBackend {
    table: RwLock<PrimeTable>,
    hard_ceiling: u64,
}

impl PrimeBackend {
    pub fn new(config: BackendConfig) -> Result<Self> {
        config.validate()?;
        let mut table = PrimeTable {
            limit: 1,
            primes: Vec::new(),
        };
        table.extend_to(config.sieve_limit);
        Ok(PrimeBackend {
            table: RwLock::new(table),
            hard_ceiling: config.hard_ceiling,
        })
    }

    /// Small backend for tests and one-off computations.
    pub fn with_limit(sieve_limit: u64) -> Result<Self> {
        PrimeBackend::new(BackendConfig {
            sieve_limit,
            hard_ceiling: DEFAULT_HARD_CEILING.max(sieve_limit),
        })
    }

    /// Process-wide backend with the default configuration.
    pub fn shared() -> &'static PrimeBackend {
        static SHARED: OnceLock<PrimeBackend> = OnceLock::new();
        SHARED.get_or_init(|| {
            PrimeBackend::new(BackendConfig::default()).expect("default config is valid")
        })
    }

    pub fn sieve_limit(&self) -> u64 {
        self.read().limit
    }

    pub fn hard_ceiling(&self) -> u64 {
        self.hard_ceiling
    }

    /// Number of primes currently tabulated.
    pub fn len(&self) -> usize {
        self.read().primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn read(&self) -> std::sync::RwLockReadGuard<'_, PrimeTable> {
        self.table.read().unwrap_or_else(|e| e.into_inner())
    }

    fn overflow(&self, what: impl Into<String>) -> Error {
        Error::IndexOverflow {
            what: what.into(),
            ceiling: self.hard_ceiling,
        }
    }

    /// Grows the table so that every prime `<= n` is stored.
    pub fn ensure_limit(&self, n: u64) -> Result<()> {
        if n <= self.read().limit {
            return Ok(());
        }
        if n > self.hard_ceiling {
            return Err(self.overflow(format!("value {n}")));
        }
        let mut table = self.table.write().unwrap_or_else(|e| e.into_inner());
        let mut target = table.limit.max(2);
        while target < n {
            target = target.saturating_mul(2);
        }
        table.extend_to(target.min(self.hard_ceiling));
        Ok(())
    }

    /// Runs `f` over the table of all primes `<= limit`.
    pub fn with_primes_up_to<R>(&self, limit: u64, f: impl FnOnce(&[u32]) -> R) -> Result<R> {
        self.ensure_limit(limit)?;
        let table = self.read();
        let end = table.primes.partition_point(|&p| (p as u64) <= limit);
        Ok(f(&table.primes[..end]))
    }

    /// The `k`-th prime, 1-based.
    pub fn nth_prime(&self, k: u64) -> Result<u64> {
        if k == 0 {
            return Err(Error::Domain("prime index must be at least 1".into()));
        }
        loop {
            {
                let table = self.read();
                if let Some(&p) = table.primes.get((k - 1) as usize) {
                    return Ok(p as u64);
                }
                if table.limit >= self.hard_ceiling {
                    return Err(self.overflow(format!("prime index {k}")));
                }
            }
            // Rosser's bound p_k < k (ln k + ln ln k) for k >= 6.
            let kf = k as f64;
            let estimate = if k < 6 {
                15.0
            } else {
                kf * (kf.ln() + kf.ln().ln())
            };
            let current = self.sieve_limit();
            let target = (estimate.ceil() as u64)
                .max(current.saturating_mul(2))
                .min(self.hard_ceiling);
            self.ensure_limit(target)?;
        }
    }

    /// `nth_prime` for an arbitrary-precision index.
    pub fn nth_prime_big(&self, k: &BigUint) -> Result<BigUint> {
        let k = k
            .to_u64()
            .ok_or_else(|| self.overflow(format!("prime index {k}")))?;
        self.nth_prime(k).map(BigUint::from)
    }

    /// The 1-based index of the prime `p`.
    pub fn prime_index(&self, p: &BigUint) -> Result<u64> {
        let small = match p.to_u64() {
            Some(v) if v <= self.hard_ceiling => v,
            _ => {
                return Err(if self.is_prime(p) {
                    self.overflow(format!("prime {p}"))
                } else {
                    Error::NotPrime { value: p.clone() }
                })
            }
        };
        self.ensure_limit(small)?;
        let table = self.read();
        let pos = table.primes.partition_point(|&q| (q as u64) < small);
        match table.primes.get(pos) {
            Some(&q) if q as u64 == small => Ok(pos as u64 + 1),
            _ => Err(Error::NotPrime { value: p.clone() }),
        }
    }

    /// π(n): the number of primes `<= n`.
    pub fn prime_count(&self, n: &BigUint) -> Result<u64> {
        let small = match n.to_u64() {
            Some(v) if v <= self.hard_ceiling => v,
            _ => return Err(self.overflow(format!("value {n}"))),
        };
        self.ensure_limit(small)?;
        let table = self.read();
        Ok(table.primes.partition_point(|&q| (q as u64) <= small) as u64)
    }

    pub fn is_prime_u64(&self, n: u64) -> bool {
        {
            let table = self.read();
            if n <= table.limit {
                return n <= u32::MAX as u64 && table.primes.binary_search(&(n as u32)).is_ok();
            }
        }
        factor::is_prime_u64(n)
    }

    /// Exact below 2^64; above it a Miller-Rabin test with
    /// [`PROBABLE_PRIME_ROUNDS`] rounds (error at most 4^-rounds).
    pub fn is_prime(&self, n: &BigUint) -> bool {
        match n.to_u64() {
            Some(v) => self.is_prime_u64(v),
            None => factor::is_probable_prime_big(n, PROBABLE_PRIME_ROUNDS),
        }
    }

    /// Prime factors of `n` in nondecreasing order, with multiplicity.
    /// `factorize(1)` is empty.
    pub fn factorize(&self, n: &BigUint) -> Result<Vec<BigUint>> {
        if n.is_zero() {
            return Err(Error::Domain("cannot factorize 0".into()));
        }
        if let Some(v) = n.to_u64() {
            return self
                .factorize_u64(v)
                .map(|fs| fs.into_iter().map(BigUint::from).collect());
        }
        let mut out = Vec::new();
        let mut rest = n.clone();
        {
            let table = self.read();
            for &p in table.primes.iter().take_while(|&&p| p < TRIAL_BOUND) {
                let p = BigUint::from(p);
                while (&rest % &p).is_zero() {
                    rest /= &p;
                    out.push(p.clone());
                }
            }
        }
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if let Some(v) = m.to_u64() {
                out.extend(self.factorize_u64(v)?.into_iter().map(BigUint::from));
            } else if self.is_prime(&m) {
                out.push(m);
            } else {
                let d = factor::rho_big(&m).ok_or_else(|| Error::FactorizationFailure {
                    cofactor: m.clone(),
                })?;
                stack.push(&m / &d);
                stack.push(d);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn factorize_u64(&self, n: u64) -> Result<Vec<u64>> {
        if n == 0 {
            return Err(Error::Domain("cannot factorize 0".into()));
        }
        let mut out = Vec::new();
        let mut rest = n;
        {
            let table = self.read();
            for &p in &table.primes {
                let p = p as u64;
                if p >= TRIAL_BOUND as u64 || p * p > rest {
                    break;
                }
                while rest.is_multiple_of(p) {
                    rest /= p;
                    out.push(p);
                }
            }
        }
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if self.is_prime_u64(m) {
                out.push(m);
                continue;
            }
            let d = factor::rho_u64(m).ok_or_else(|| Error::FactorizationFailure {
                cofactor: BigUint::from(m),
            })?;
            stack.push(m / d);
            stack.push(d);
        }
        out.sort_unstable();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn backend() -> PrimeBackend {
        PrimeBackend::with_limit(1 << 12).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn nth_prime_examples() {
        let b = backend();
        assert_eq!(b.nth_prime(1).unwrap(), 2);
        assert_eq!(b.nth_prime(4).unwrap(), 7);
        assert_eq!(b.nth_prime(25).unwrap(), 97);
        assert!(matches!(b.nth_prime(0), Err(Error::Domain(_))));
    }

    #[test]
    fn nth_prime_grows_table() {
        let b = backend();
        assert_eq!(b.nth_prime(10_000).unwrap(), 104_729);
        assert!(b.sieve_limit() >= 104_729);
    }

    #[test]
    fn nth_prime_past_ceiling_overflows() {
        let b = PrimeBackend::new(BackendConfig {
            sieve_limit: 100,
            hard_ceiling: 1000,
        })
        .unwrap();
        assert_eq!(b.nth_prime(168).unwrap(), 997);
        assert!(matches!(b.nth_prime(169), Err(Error::IndexOverflow { .. })));
        assert!(matches!(
            b.prime_index(&big(1009)),
            Err(Error::IndexOverflow { .. })
        ));
        assert!(matches!(
            b.prime_index(&big(1011)),
            Err(Error::NotPrime { .. })
        ));
        assert!(matches!(
            b.prime_count(&big(1001)),
            Err(Error::IndexOverflow { .. })
        ));
    }

    #[test]
    fn prime_index_examples() {
        let b = backend();
        assert_eq!(b.prime_index(&big(2)).unwrap(), 1);
        assert_eq!(b.prime_index(&big(7)).unwrap(), 4);
        assert!(matches!(
            b.prime_index(&big(6)),
            Err(Error::NotPrime { .. })
        ));
        assert!(matches!(
            b.prime_index(&big(1)),
            Err(Error::NotPrime { .. })
        ));
    }

    #[test]
    fn prime_count_examples() {
        let b = backend();
        assert_eq!(b.prime_count(&big(1)).unwrap(), 0);
        assert_eq!(b.prime_count(&big(2)).unwrap(), 1);
        assert_eq!(b.prime_count(&big(10)).unwrap(), 4);
        assert_eq!(b.prime_count(&big(1_000_000)).unwrap(), 78_498);
    }

    #[test]
    fn is_prime_examples() {
        let b = backend();
        assert!(!b.is_prime(&big(0)));
        assert!(!b.is_prime(&big(1)));
        assert!(b.is_prime(&big(17)));
        assert!(!b.is_prime(&big(561)));
    }

    #[test]
    fn factorize_examples() {
        let b = backend();
        assert_eq!(b.factorize(&big(12)).unwrap(), vec![big(2), big(2), big(3)]);
        assert_eq!(b.factorize(&big(17)).unwrap(), vec![big(17)]);
        assert_eq!(
            b.factorize(&big(9_999_999_967)).unwrap(),
            vec![big(9_999_999_967)]
        );
        assert!(b.factorize(&big(1)).unwrap().is_empty());
        assert!(b.factorize(&big(0)).is_err());
    }

    #[test]
    fn factorize_beyond_u64() {
        let b = backend();
        let p = big(4_294_967_311);
        let q = big(18_446_744_073_709_551_557);
        let n = &p * &p * &q * big(12);
        assert_eq!(
            b.factorize(&n).unwrap(),
            vec![big(2), big(2), big(3), p.clone(), p, q]
        );
    }

    #[test]
    fn config_validation() {
        let bad = BackendConfig {
            sieve_limit: 1 << 20,
            hard_ceiling: 1 << 10,
        };
        assert!(PrimeBackend::new(bad).is_err());
        let too_high = BackendConfig {
            sieve_limit: 100,
            hard_ceiling: (1 << 32) + 1,
        };
        assert!(PrimeBackend::new(too_high).is_err());
    }
}
