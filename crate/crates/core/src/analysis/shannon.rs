//! Entropy, expected Matula codeword length, and the summatory floor on `G`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gim::{self, BoundOutcome, GimTable};

/// Tolerance on the total mass of a [`Distribution`].
pub const MASS_TOLERANCE: f64 = 1e-12;
/// Lowest acceptable `expected_length - entropy`.
pub const RESIDUAL_TOLERANCE: f64 = -1e-9;

/// A probability vector on `{1, ..., n}`; `weights[i]` is the mass of `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "weight of {} is {}",
                i + 1,
                weights[i]
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}"
            )));
        }
        Ok(Distribution { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        Distribution::new(vec![1.0 / n as f64; n])
    }

    /// All mass on `at` within support `{1..n}`.
    pub fn point_mass(n: usize, at: usize) -> Result<Self> {
        if at == 0 || at > n {
            return Err(Error::InvalidDistribution(format!(
                "point {at} outside 1..={n}"
            )));
        }
        let mut weights = vec![0.0; n];
        weights[at - 1] = 1.0;
        Distribution::new(weights)
    }

    /// Symmetric Dirichlet(1) sample: normalized unit exponentials.
    pub fn dirichlet<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        Distribution::new(draws.into_iter().map(|x| x / total).collect())
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy(mu: &Distribution) -> f64 {
    -mu.weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| w * w.log2())
        .sum::<f64>()
}

/// `E[len(code(S))] = 2 sum_i mu(i) g(i)`.
pub fn expected_length(mu: &Distribution, table: &GimTable) -> Result<f64> {
    let n = mu.support_size() as u64;
    if n > table.limit() {
        return Err(Error::Capacity(format!(
            "support {n} exceeds the g table ({})",
            table.limit()
        )));
    }
    Ok(2.0
        * mu.weights
            .iter()
            .zip(table.values())
            .map(|(&w, &g)| w * g as f64)
            .sum::<f64>())
}

/// `expected_length(mu) - entropy(mu)`.
pub fn verify_shannon_bound(mu: &Distribution, table: &GimTable) -> Result<f64> {
    Ok(expected_length(mu, table)? - entropy(mu))
}

/// Expected length under the uniform law on `{1..n}` as an exact fraction
/// `(numerator, denominator)` in lowest terms, summed term by term.
pub fn uniform_expected_length_exact(n: u64, table: &GimTable) -> Result<(u64, u64)> {
    if n == 0 || n > table.limit() {
        return Err(Error::Capacity(format!(
            "uniform support {n} out of table range"
        )));
    }
    // sum_i (1/n) * 2 g(i) with the common denominator n.
    let numerator: u64 = table.values()[..n as usize]
        .iter()
        .map(|&g| 2 * g as u64)
        .sum();
    let d = num_integer::gcd(numerator, n);
    Ok((numerator / d, n / d))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShannonViolation {
    pub sample: usize,
    pub support: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShannonReport {
    pub seed: u64,
    pub samples: usize,
    pub max_support: usize,
    pub min_residual: f64,
    /// `(sample index, support size)` of the smallest residual.
    pub min_residual_at: (usize, usize),
    pub violations: Vec<ShannonViolation>,
}

impl ShannonReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Draws `samples` Dirichlet(1) distributions from a seeded generator. Each
/// support size is drawn uniformly from `1..=max_support`.
pub fn shannon_suite(
    table: &GimTable,
    samples: usize,
    max_support: usize,
    seed: u64,
) -> Result<ShannonReport> {
    if max_support == 0 {
        return Err(Error::Domain("max support must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ShannonReport {
        seed,
        samples,
        max_support,
        min_residual: f64::INFINITY,
        min_residual_at: (0, 0),
        violations: Vec::new(),
    };
    for sample in 0..samples {
        let support = rng.random_range(1..=max_support);
        let mu = Distribution::dirichlet(support, &mut rng)?;
        let residual = verify_shannon_bound(&mu, table)?;
        if residual < report.min_residual {
            report.min_residual = residual;
            report.min_residual_at = (sample, support);
        }
        if residual < RESIDUAL_TOLERANCE {
            report.violations.push(ShannonViolation {
                sample,
                support,
                residual,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conclusion3Report {
    pub limit: u64,
    pub checked: u64,
    /// Smallest `G(n) - n ln n / ln 4`, taken over `n >= 2` (at `n = 1`
    /// both sides are 0 trivially).
    pub min_slack: f64,
    pub min_slack_at: u64,
    /// Values of `n` where `G(n) = n ln n / ln 4` was certified exactly.
    pub exact_equalities: Vec<u64>,
    pub first_failure: Option<u64>,
}

impl Conclusion3Report {
    pub fn passes(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks `G(n) >= n ln n / ln 4` for every `n <= limit`.
pub fn verify_conclusion3_in(table: &GimTable, limit: u64) -> Result<Conclusion3Report> {
    if limit == 0 {
        return Err(Error::Domain("limit must be at least 1".into()));
    }
    if limit > table.limit() {
        return Err(Error::Capacity(format!(
            "limit {limit} exceeds the g table ({})",
            table.limit()
        )));
    }
    let mut report = Conclusion3Report {
        limit,
        checked: 0,
        min_slack: 0.0,
        min_slack_at: 1,
        exact_equalities: Vec::new(),
        first_failure: None,
    };
    let mut big_g = 0u64;
    for n in 1..=limit {
        big_g += table.get(n).expect("within table");
        let slack = big_g as f64 - gim::shannon_floor(n);
        if n == 2 || (n > 2 && slack < report.min_slack) {
            report.min_slack = slack;
            report.min_slack_at = n;
        }
        match gim::check_shannon_floor(n, big_g) {
            BoundOutcome::Holds => {}
            BoundOutcome::Equal => report.exact_equalities.push(n),
            BoundOutcome::Violated => {
                report.first_failure.get_or_insert(n);
            }
        }
        report.checked += 1;
    }
    if report.min_slack_at == 2 && report.exact_equalities.contains(&2) {
        report.min_slack = 0.0;
    }
    Ok(report)
}

pub fn verify_conclusion3(limit: u64) -> Result<Conclusion3Report> {
    verify_conclusion3_in(&GimTable::new(limit.max(1))?, limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> GimTable {
        GimTable::new(1000).unwrap()
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec![]).is_err());
        assert!(Distribution::new(vec![0.5, 0.4]).is_err());
        assert!(Distribution::new(vec![1.5, -0.5]).is_err());
        assert!(Distribution::new(vec![f64::NAN, 1.0]).is_err());
        assert!(Distribution::point_mass(3, 0).is_err());
        assert!(Distribution::point_mass(3, 4).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&Distribution::uniform(4).unwrap()), 2.0);
        assert_eq!(entropy(&Distribution::point_mass(5, 3).unwrap()), 0.0);
        let mu = Distribution::new(vec![0.5, 0.25, 0.25]).unwrap();
        assert_eq!(entropy(&mu), 1.5);
    }

    #[test]
    fn entropy_of_uniform_is_log_n() {
        for n in 1..=1000 {
            let h = entropy(&Distribution::uniform(n).unwrap());
            assert!((h - (n as f64).log2()).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn expected_length_examples() {
        let t = table();
        assert_eq!(
            expected_length(&Distribution::point_mass(1, 1).unwrap(), &t).unwrap(),
            0.0
        );
        assert_eq!(
            expected_length(&Distribution::uniform(4).unwrap(), &t).unwrap(),
            2.5
        );
        assert_eq!(
            expected_length(&Distribution::point_mass(17, 17).unwrap(), &t).unwrap(),
            8.0
        );
        assert!(expected_length(&Distribution::uniform(1001).unwrap(), &t).is_err());
    }

    #[test]
    fn residual_examples() {
        let t = table();
        let r = verify_shannon_bound(&Distribution::uniform(4).unwrap(), &t).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        let r = verify_shannon_bound(&Distribution::uniform(2).unwrap(), &t).unwrap();
        assert!(r.abs() < 1e-15);
        let r = verify_shannon_bound(&Distribution::point_mass(1, 1).unwrap(), &t).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn residual_can_go_negative_off_the_primes() {
        // The code over all naturals is not prefix-free ("" encodes 1), so
        // mass concentrated on 1 beats the entropy: E = 0.4, H = 0.72.
        let t = table();
        let mu = Distribution::new(vec![0.8, 0.2]).unwrap();
        let r = verify_shannon_bound(&mu, &t).unwrap();
        assert!(r < -0.3);
    }

    #[test]
    fn uniform_exact_matches_big_g() {
        let t = table();
        for n in 1..=1000u64 {
            let (num, den) = uniform_expected_length_exact(n, &t).unwrap();
            let big = t.big_g(n).unwrap();
            // num/den == 2G/n
            assert_eq!(num as u128 * n as u128, 2 * big as u128 * den as u128);
        }
    }

    #[test]
    fn dirichlet_is_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        let x = Distribution::dirichlet(50, &mut a).unwrap();
        let y = Distribution::dirichlet(50, &mut b).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn conclusion3_examples() {
        let r = verify_conclusion3(4).unwrap();
        assert!(r.passes());
        assert_eq!(r.min_slack_at, 2);
        assert_eq!(r.min_slack, 0.0);
        assert_eq!(r.exact_equalities, [1, 2]);

        let r = verify_conclusion3(1).unwrap();
        assert!(r.passes());
        assert_eq!(r.min_slack_at, 1);

        let r = verify_conclusion3(1000).unwrap();
        assert!(r.passes());
    }
}
