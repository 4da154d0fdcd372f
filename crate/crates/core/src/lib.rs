//! Matula numbers: the bijection between the positive integers and
//! topological rooted trees, the prefix code it induces over Dyck words,
//! and the Gutman-Ivić-Matula function `g(n)` (edges of the tree of `n`).
//!
//! ```
//! use matula::{codec, primes::PrimeBackend, tree};
//! use num_bigint::BigUint;
//!
//! let backend = PrimeBackend::with_limit(1 << 12).unwrap();
//! let word = codec::encode(&BigUint::from(17u32), &backend).unwrap();
//! assert_eq!(word.as_str(), "((()()))");
//! let t = tree::tau(&BigUint::from(17u32), &backend).unwrap();
//! assert_eq!(t.edge_count(), 4);
//! ```

pub mod analysis;
pub mod cli;
pub mod codec;
pub mod error;
mod fixed_ln;
pub mod gim;
pub mod primes;
pub mod tree;

pub use codec::DyckWord;
pub use error::{Error, Result};
pub use primes::PrimeBackend;
pub use tree::RootedTree;
