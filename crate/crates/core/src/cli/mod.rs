//! The `matula` command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 malformed input
//! (the message names the byte offset), 3 index overflow, 4 factorization
//! failure, 5 capacity exceeded.

mod config;
mod render;

use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::analysis::{self, CheckRecord};
use crate::codec::{self, DyckWord};
use crate::error::{Error, Result};
use crate::gim::{self, Gim, GimTable};
use crate::primes::PrimeBackend;
use crate::tree;

pub use config::{CliConfig, OutputFormat, CONFIG_ENV, DEFAULT_SEED};
pub use render::ascii_tree;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INDEX_OVERFLOW: i32 = 3;
pub const EXIT_FACTORIZATION: i32 = 4;
pub const EXIT_CAPACITY: i32 = 5;

/// Default `--limit` for `verify` and `table`.
pub const DEFAULT_LIMIT: u64 = 10_000;
/// Distributions drawn by the `shannon` suite.
pub const SHANNON_SAMPLES: usize = 1000;
/// Largest support drawn by the `shannon` suite.
pub const SHANNON_MAX_SUPPORT: usize = 1000;

#[derive(Debug, Parser)]
#[command(
    name = "matula",
    version,
    about = "Matula numbers, the Matula code, and the GIM function"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Initial prime sieve limit.
    #[arg(long, global = true)]
    pub sieve_limit: Option<u64>,
    /// Largest value the prime sieve may grow to (at most 2^32).
    #[arg(long, global = true)]
    pub hard_ceiling: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Reject codewords whose sibling blocks are out of canonical order (default).
    #[arg(long, global = true, conflicts_with = "lenient")]
    pub strict: bool,
    /// Accept sibling blocks in any order.
    #[arg(long, global = true)]
    pub lenient: bool,
    /// Seed for the sampled verification suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// key=value config file; defaults to $MATULA_CONFIG when set.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the codeword of N (one per stdin line when N is omitted).
    Encode { n: Option<String> },
    /// Print the number spelled by WORD (one per stdin line when omitted).
    Decode { word: Option<String> },
    /// Print g(N), the edge count of the tree of N.
    G { n: Option<String> },
    /// Print G(N) = g(1) + ... + g(N).
    #[command(name = "G", alias = "big-g")]
    BigG { n: Option<String> },
    /// Emit n, g, G and the closed-form bounds for n = 1..=LIMIT.
    Table {
        #[arg(long)]
        limit: Option<u64>,
        #[arg(value_name = "LIMIT")]
        positional: Option<u64>,
    },
    /// Run verification suites; exit 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u64,
    },
    /// Draw the canonical tree of N with its codeword and edge count.
    Tree { n: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    KraftPrimes,
    KraftNaturals,
    Bounds,
    Conclusion3,
    Shannon,
    All,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::IndexOverflow { .. } => EXIT_INDEX_OVERFLOW,
        Error::FactorizationFailure { .. } => EXIT_FACTORIZATION,
        Error::Capacity(_) => EXIT_CAPACITY,
        Error::Unbalanced { .. }
        | Error::NonCanonical { .. }
        | Error::ParseInt { .. }
        | Error::NotPrime { .. }
        | Error::Domain(_)
        | Error::InvalidDistribution(_)
        | Error::Config(_) => EXIT_PARSE,
    }
}

/// Parses an unbounded decimal. Leading zeros, signs and whitespace are
/// rejected.
pub fn parse_natural(text: &str) -> Result<BigUint> {
    let err = |offset, reason| Error::ParseInt {
        input: text.to_owned(),
        offset,
        reason,
    };
    if text.is_empty() {
        return Err(err(0, "empty input"));
    }
    if let Some(i) = text.bytes().position(|b| !b.is_ascii_digit()) {
        return Err(err(i, "not a decimal digit"));
    }
    if text.len() > 1 && text.starts_with('0') {
        return Err(err(0, "leading zero"));
    }
    Ok(text.parse().expect("validated decimal digits"))
}

fn parse_positive(text: &str) -> Result<BigUint> {
    let n = parse_natural(text)?;
    if n == BigUint::ZERO {
        return Err(Error::Domain("expected a positive integer, got 0".into()));
    }
    Ok(n)
}

fn parse_positive_u64(text: &str) -> Result<u64> {
    let n = parse_positive(text)?;
    u64::try_from(&n).map_err(|_| Error::Capacity(format!("{n} does not fit in 64 bits")))
}

/// Resolves defaults, then the config file, then flags.
pub fn resolve_config(global: &GlobalArgs, env_path: Option<PathBuf>) -> Result<CliConfig> {
    let mut config = CliConfig::default();
    if let Some(path) = global.config.clone().or(env_path) {
        config.apply_file(&path)?;
    }
    if let Some(v) = global.sieve_limit {
        config.sieve_limit = v;
    }
    if let Some(v) = global.hard_ceiling {
        config.hard_ceiling = v;
    }
    if let Some(v) = global.format {
        config.output_format = v;
    }
    if global.strict {
        config.strict = true;
    }
    if global.lenient {
        config.strict = false;
    }
    if let Some(v) = global.seed {
        config.seed = v;
    }
    config.validate()?;
    Ok(config)
}

struct Session<'a> {
    config: CliConfig,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

#[derive(Serialize)]
struct Conversion<'a> {
    input: &'a str,
    output: String,
}

impl Session<'_> {
    /// Runs `f` on one item or on every stdin line. Returns the exit code
    /// of the first failing item.
    fn convert(
        &mut self,
        item: Option<String>,
        input: &mut dyn BufRead,
        skip_blank: bool,
        mut f: impl FnMut(&str) -> Result<String>,
    ) -> i32 {
        let items: Vec<String> = match item {
            Some(s) => vec![s],
            None => {
                let mut lines = Vec::new();
                for line in input.lines() {
                    match line {
                        Ok(l) => lines.push(l.strip_suffix('\r').unwrap_or(&l).to_owned()),
                        Err(e) => {
                            let _ = writeln!(self.err, "error: reading stdin: {e}");
                            return EXIT_PARSE;
                        }
                    }
                }
                lines
            }
        };
        let format = self.config.output_format;
        if format == OutputFormat::Csv {
            let _ = writeln!(self.out, "input,output");
        }
        let mut code = EXIT_OK;
        for (lineno, text) in items.iter().enumerate() {
            if skip_blank && text.trim().is_empty() {
                continue;
            }
            match f(text) {
                Ok(output) => {
                    let _ = match format {
                        OutputFormat::Plain => writeln!(self.out, "{output}"),
                        OutputFormat::Csv => writeln!(self.out, "{text},{output}"),
                        OutputFormat::Json => writeln!(
                            self.out,
                            "{}",
                            serde_json::to_string(&Conversion {
                                input: text,
                                output
                            })
                            .expect("strings serialize")
                        ),
                    };
                }
                Err(e) => {
                    if items.len() > 1 {
                        let _ = writeln!(self.err, "error: line {}: {e}", lineno + 1);
                    } else {
                        let _ = writeln!(self.err, "error: {e}");
                    }
                    if code == EXIT_OK {
                        code = exit_code(&e);
                    }
                }
            }
        }
        code
    }

    fn fail(&mut self, e: &Error) -> i32 {
        let _ = writeln!(self.err, "error: {e}");
        exit_code(e)
    }

    fn table(&mut self, limit: u64) -> i32 {
        let result = GimTable::new(limit)
            .and_then(|t| render::render_table(&render::table_rows(&t), self.config.output_format));
        match result {
            Ok(text) => {
                let _ = self.out.write_all(text.as_bytes());
                EXIT_OK
            }
            Err(e) => self.fail(&e),
        }
    }

    fn verify(&mut self, suite: Suite, limit: u64) -> i32 {
        match run_suite(suite, limit, self.config.seed) {
            Ok(records) => {
                let text = render::render_records(&records, self.config.output_format);
                let _ = self.out.write_all(text.as_bytes());
                if records.iter().all(|r| r.pass) {
                    EXIT_OK
                } else {
                    EXIT_CHECK_FAILED
                }
            }
            Err(e) => self.fail(&e),
        }
    }

    fn tree(&mut self, backend: &PrimeBackend, text: &str) -> i32 {
        let result = (|| {
            let n = parse_positive(text)?;
            let t = tree::tau(&n, backend)?;
            let numbers = t.node_numbers(backend)?;
            let word = codec::tree_to_dyck(&t);
            Ok::<_, Error>((n, t, numbers, word))
        })();
        let (n, t, numbers, word) = match result {
            Ok(v) => v,
            Err(e) => return self.fail(&e),
        };
        let drawing = ascii_tree(&t, &numbers);
        let _ = match self.config.output_format {
            OutputFormat::Json => writeln!(
                self.out,
                "{}",
                serde_json::json!({
                    "n": n.to_string(),
                    "word": word.as_str(),
                    "edges": t.edge_count(),
                    "drawing": drawing,
                })
            ),
            OutputFormat::Csv => writeln!(self.out, "n,word,edges\n{n},{word},{}", t.edge_count()),
            OutputFormat::Plain => write!(
                self.out,
                "n = {n}\nword = {}\nedges = {}\n{drawing}",
                if word.is_empty() {
                    "(empty)"
                } else {
                    word.as_str()
                },
                t.edge_count()
            ),
        };
        EXIT_OK
    }
}

/// Runs the selected suite(s) and collects their records.
pub fn run_suite(suite: Suite, limit: u64, seed: u64) -> Result<Vec<CheckRecord>> {
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let needs_table = suite != Suite::Shannon || limit > 0;
    let table_limit = if wants(Suite::Shannon) {
        limit.max(SHANNON_MAX_SUPPORT as u64)
    } else {
        limit
    }
    .max(2);
    let table = if needs_table {
        GimTable::new(table_limit)?
    } else {
        GimTable::new(SHANNON_MAX_SUPPORT as u64)?
    };
    let mut records = Vec::new();
    if wants(Suite::KraftPrimes) {
        records.push(analysis::sweep_prime_kraft(&table, limit.max(2))?.to_record());
    }
    if wants(Suite::KraftNaturals) {
        records.extend(analysis::verify_natural_kraft(&table, limit)?.to_records());
    }
    if wants(Suite::Bounds) {
        records.push(gim::verify_sandwich(&table, 7, limit.max(7).min(table.limit()))?.to_record());
    }
    if wants(Suite::Conclusion3) {
        records.push(analysis::verify_conclusion3_in(&table, limit.max(1))?.to_record());
    }
    if wants(Suite::Shannon) {
        let max_support = SHANNON_MAX_SUPPORT.min(limit.max(1) as usize);
        records
            .push(analysis::shannon_suite(&table, SHANNON_SAMPLES, max_support, seed)?.to_record());
    }
    Ok(records)
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(argv: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let env_path = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let config = match resolve_config(&cli.global, env_path) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let mut session = Session { config, out, err };

    let backend_config = session.config.backend_config();
    let backend = || PrimeBackend::new(backend_config);

    match cli.command {
        Command::Encode { n } => {
            let b = match backend() {
                Ok(b) => b,
                Err(e) => return session.fail(&e),
            };
            session.convert(n, input, true, |s| {
                codec::encode(&parse_positive(s.trim())?, &b).map(DyckWord::into_string)
            })
        }
        Command::Decode { word } => {
            let b = match backend() {
                Ok(b) => b,
                Err(e) => return session.fail(&e),
            };
            let strict = session.config.strict;
            session.convert(word, input, false, |s| {
                codec::decode_str(s.trim_end(), strict, &b).map(|n| n.to_string())
            })
        }
        Command::G { n } => {
            let b = match backend() {
                Ok(b) => b,
                Err(e) => return session.fail(&e),
            };
            let gim = Gim::new(&b);
            session.convert(n, input, true, |s| {
                gim.g(&parse_positive(s.trim())?).map(|v| v.to_string())
            })
        }
        Command::BigG { n } => session.convert(n, input, true, |s| {
            gim::big_g(parse_positive_u64(s.trim())?).map(|v| v.to_string())
        }),
        Command::Table { limit, positional } => {
            let limit = limit.or(positional).unwrap_or(DEFAULT_LIMIT);
            if limit == 0 {
                return session.fail(&Error::Domain("table limit must be at least 1".into()));
            }
            session.table(limit)
        }
        Command::Verify { suite, limit } => session.verify(suite, limit),
        Command::Tree { n } => {
            let b = match backend() {
                Ok(b) => b,
                Err(e) => return session.fail(&e),
            };
            session.tree(&b, &n)
        }
    }
}
