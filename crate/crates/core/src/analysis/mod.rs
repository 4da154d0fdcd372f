//! Exact Kraft sums, the Euler product, and the entropy bounds.
//!
//! Kraft sums are accumulated in [`Base4Fixed`], so every comparison
//! against 1/4, 1/2 or 2 is exact. Floating point is used only for
//! logarithms: entropy, the Euler product, and the `G` floor.

mod base4;
mod kraft;
mod shannon;

use serde::Serialize;

pub use base4::Base4Fixed;
pub use kraft::{
    euler_product_estimate, euler_product_estimate_in, kraft_sum_naturals, kraft_sum_naturals_in,
    kraft_sum_primes, kraft_sum_primes_in, sweep_prime_kraft, verify_natural_kraft,
    NaturalKraftReport, PrimeKraftSweep, EULER_CONSISTENCY_EPS,
};
pub use shannon::{
    entropy, expected_length, shannon_suite, uniform_expected_length_exact, verify_conclusion3,
    verify_conclusion3_in, verify_shannon_bound, Conclusion3Report, Distribution, ShannonReport,
    ShannonViolation, MASS_TOLERANCE, RESIDUAL_TOLERANCE,
};

use crate::gim::SandwichReport;

/// Digits used for the decimal rendering of exact values.
pub const DECIMAL_DIGITS: usize = 30;

/// Where the smallest slack of a check was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgminSlack {
    pub n: u64,
    pub slack: f64,
}

/// One verification outcome, in the shape emitted by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub limit: u64,
    /// Exact values as `numerator/4^scale`; other values in plain decimal.
    pub value: String,
    pub bound: String,
    pub pass: bool,
    pub argmin_slack: Option<ArgminSlack>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl PrimeKraftSweep {
    pub fn to_record(&self) -> CheckRecord {
        let mut detail = format!(
            "{} partial sums; strictly increasing: {}; >= 1/4 (equal only at p = 2): {}; < 1/2: {}",
            self.checkpoints, self.strictly_increasing, self.above_quarter, self.below_half
        );
        if let Some(p) = self.first_failure {
            detail.push_str(&format!("; first failure at p = {p}"));
        }
        CheckRecord {
            check: "kraft-primes".into(),
            limit: self.limit,
            value: self.value.to_string(),
            bound: "< 1/2".into(),
            pass: self.passes(),
            argmin_slack: None,
            decimal: Some(self.value.to_decimal(DECIMAL_DIGITS)),
            detail: Some(detail),
        }
    }
}

impl NaturalKraftReport {
    pub fn to_records(&self) -> Vec<CheckRecord> {
        vec![
            CheckRecord {
                check: "kraft-naturals".into(),
                limit: self.limit,
                value: self.naturals.to_string(),
                bound: "< 2".into(),
                pass: self.naturals_below_two && self.consistent,
                argmin_slack: None,
                decimal: Some(self.naturals.to_decimal(DECIMAL_DIGITS)),
                detail: Some(format!(
                    "primes partial sum {} ({}); partial sum <= Euler product: {}",
                    self.primes,
                    self.primes.to_decimal(DECIMAL_DIGITS),
                    self.consistent
                )),
            },
            CheckRecord {
                check: "euler-product".into(),
                limit: self.limit,
                value: format!("{:.15}", self.euler_product),
                bound: "< 2".into(),
                pass: self.euler_below_two,
                argmin_slack: None,
                decimal: None,
                detail: None,
            },
        ]
    }
}

impl SandwichReport {
    pub fn to_record(&self) -> CheckRecord {
        let (n, slack) = if self.min_lower_slack <= self.min_upper_slack {
            (self.min_lower_slack_at, self.min_lower_slack)
        } else {
            (self.min_upper_slack_at, self.min_upper_slack)
        };
        let mut detail = format!(
            "{} values; min lower slack {:.6} at n = {}; min upper slack {:.6} at n = {}; upper bound attained at {:?}",
            self.checked,
            self.min_lower_slack,
            self.min_lower_slack_at,
            self.min_upper_slack,
            self.min_upper_slack_at,
            self.upper_equalities
        );
        if let Some(w) = self.violations.first() {
            detail.push_str(&format!(
                "; violation: g({}) = {} against {} bound {}",
                w.n, w.g, w.side, w.bound
            ));
        }
        CheckRecord {
            check: "bounds".into(),
            limit: self.to,
            value: format!("{} violations", self.violations.len()),
            bound: "ln n / ln ln n <= g(n) <= 3 ln n / ln 5".into(),
            pass: self.passes(),
            argmin_slack: Some(ArgminSlack { n, slack }),
            decimal: None,
            detail: Some(detail),
        }
    }
}

impl Conclusion3Report {
    pub fn to_record(&self) -> CheckRecord {
        let mut detail = format!(
            "{} values; exact equality at {:?}",
            self.checked, self.exact_equalities
        );
        if let Some(n) = self.first_failure {
            detail.push_str(&format!("; first failure at n = {n}"));
        }
        CheckRecord {
            check: "conclusion3".into(),
            limit: self.limit,
            value: format!("min slack {}", self.min_slack),
            bound: "G(n) >= n ln n / ln 4".into(),
            pass: self.passes(),
            argmin_slack: Some(ArgminSlack {
                n: self.min_slack_at,
                slack: self.min_slack,
            }),
            decimal: None,
            detail: Some(detail),
        }
    }
}

impl ShannonReport {
    pub fn to_record(&self) -> CheckRecord {
        let mut detail = format!(
            "seed {}; {} Dirichlet(1) samples, support sizes uniform in 1..={}; smallest residual in sample {} (support {})",
            self.seed, self.samples, self.max_support, self.min_residual_at.0, self.min_residual_at.1
        );
        if !self.violations.is_empty() {
            let supports: Vec<usize> = self.violations.iter().map(|v| v.support).collect();
            detail.push_str(&format!(
                "; {} violations, supports {:?}",
                self.violations.len(),
                supports
            ));
        }
        CheckRecord {
            check: "shannon".into(),
            limit: self.max_support as u64,
            value: format!("min residual {}", self.min_residual),
            bound: format!("expected_length - entropy >= {RESIDUAL_TOLERANCE}"),
            pass: self.passes(),
            argmin_slack: Some(ArgminSlack {
                n: self.min_residual_at.1 as u64,
                slack: self.min_residual,
            }),
            decimal: None,
            detail: Some(detail),
        }
    }
}
