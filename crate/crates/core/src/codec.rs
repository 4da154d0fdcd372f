//! The Matula code: naturals and rooted trees as Dyck words over `(` and `)`.
//!
//! A prime `p(k)` is written `(` + code(k) + `)`, a composite is the
//! concatenation of the codewords of its prime factors in nondecreasing
//! order, and 1 is the empty word. The codeword of `n` is the parenthesized
//! form of the canonical tree `tau(n)`, and its length is `2 g(n)`.
//!
//! Decoding is one left-to-right pass with a depth counter and an explicit
//! reduction stack. In strict mode sibling blocks must appear in
//! nondecreasing numeric order; lenient mode accepts any order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::primes::PrimeBackend;
use crate::tree::RootedTree;

/// A balanced word over `(` and `)`. The empty word encodes 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DyckWord(String);

impl DyckWord {
    pub fn empty() -> Self {
        DyckWord(String::new())
    }

    /// Validates `text`. One trailing newline (`\n` or `\r\n`) is tolerated
    /// and stripped.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text
            .strip_suffix('\n')
            .map(|t| t.strip_suffix('\r').unwrap_or(t))
            .unwrap_or(text);
        check_balanced(text.as_bytes())?;
        Ok(DyckWord(text.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation; decodes to the product of the two numbers.
    pub fn concat(&self, other: &DyckWord) -> DyckWord {
        DyckWord(format!("{}{}", self.0, other.0))
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for DyckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for DyckWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DyckWord::parse(s)
    }
}

impl AsRef<str> for DyckWord {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn check_balanced(bytes: &[u8]) -> Result<()> {
    // Offsets of currently open '('; the bottom one is reported if unclosed.
    let mut open: Vec<usize> = Vec::new();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => open.push(i),
            b')' => {
                if open.pop().is_none() {
                    return Err(Error::Unbalanced {
                        offset: i,
                        reason: "')' without matching '('",
                    });
                }
            }
            _ => {
                return Err(Error::Unbalanced {
                    offset: i,
                    reason: "symbol outside the alphabet {'(', ')'}",
                })
            }
        }
    }
    match open.first() {
        Some(&offset) => Err(Error::Unbalanced {
            offset,
            reason: "'(' is never closed",
        }),
        None => Ok(()),
    }
}

/// Parenthesized form of `t` in stored child order.
pub(crate) fn parens_of(t: &RootedTree) -> String {
    let arena = t.arena();
    let mut out = String::with_capacity(2 * t.edge_count());
    // Each entry is (node, index of next child to visit).
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    while let Some(top) = stack.last_mut() {
        let (node, next) = *top;
        if let Some(&child) = arena[node].get(next) {
            top.1 += 1;
            out.push('(');
            stack.push((child, 0));
        } else {
            stack.pop();
            if !stack.is_empty() {
                out.push(')');
            }
        }
    }
    out
}

/// Serializes `t` in its stored order. Canonicalize first to get the
/// codeword of its Matula number.
pub fn tree_to_dyck(t: &RootedTree) -> DyckWord {
    DyckWord(parens_of(t))
}

/// Builds the tree spelled by `w`. Strict mode rejects sibling blocks out
/// of nondecreasing Matula order; lenient mode returns the canonical tree.
pub fn dyck_to_tree(w: &DyckWord, strict: bool, backend: &PrimeBackend) -> Result<RootedTree> {
    let bytes = w.as_str().as_bytes();
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut start: Vec<usize> = vec![0];
    let mut path: Vec<usize> = vec![0];
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'(' {
            let node = children.len();
            children.push(Vec::new());
            start.push(i);
            children[*path.last().expect("root stays on the path")].push(node);
            path.push(node);
        } else {
            path.pop();
        }
    }
    let tree = RootedTree::from_arena(children);
    if !strict {
        return tree.canonicalize(backend);
    }
    let numbers = tree.node_numbers(backend)?;
    for siblings in tree.arena() {
        for (k, pair) in siblings.windows(2).enumerate() {
            if numbers[pair[1]] < numbers[pair[0]] {
                return Err(Error::NonCanonical {
                    offset: start[pair[1]],
                    block: k + 1,
                });
            }
        }
    }
    Ok(tree)
}

/// The codeword of `n`, built straight from the factorization.
pub fn encode(n: &BigUint, backend: &PrimeBackend) -> Result<DyckWord> {
    enum Task {
        Open,
        Close,
        Expand(BigUint),
    }
    if n == &BigUint::ZERO {
        return Err(Error::Domain("only n >= 1 has a codeword".into()));
    }
    let mut out = String::new();
    let mut stack = vec![Task::Expand(n.clone())];
    while let Some(task) = stack.pop() {
        match task {
            Task::Open => out.push('('),
            Task::Close => out.push(')'),
            Task::Expand(m) => {
                for f in backend.factorize(&m)?.iter().rev() {
                    stack.push(Task::Close);
                    stack.push(Task::Expand(BigUint::from(backend.prime_index(f)?)));
                    stack.push(Task::Open);
                }
            }
        }
    }
    Ok(DyckWord(out))
}

pub fn encode_u64(n: u64, backend: &PrimeBackend) -> Result<DyckWord> {
    encode(&BigUint::from(n), backend)
}

/// Evaluates `w` to its Matula number in a single pass.
pub fn decode(w: &DyckWord, strict: bool, backend: &PrimeBackend) -> Result<BigUint> {
    struct Frame {
        product: BigUint,
        last_block: Option<BigUint>,
        blocks: usize,
        start: usize,
    }
    let mut stack = vec![Frame {
        product: BigUint::one(),
        last_block: None,
        blocks: 0,
        start: 0,
    }];
    for (i, &b) in w.as_str().as_bytes().iter().enumerate() {
        if b == b'(' {
            stack.push(Frame {
                product: BigUint::one(),
                last_block: None,
                blocks: 0,
                start: i,
            });
            continue;
        }
        let done = stack.pop().expect("balanced word");
        let block = backend.nth_prime_big(&done.product)?;
        let parent = stack.last_mut().expect("balanced word");
        if strict {
            if let Some(prev) = &parent.last_block {
                if &block < prev {
                    return Err(Error::NonCanonical {
                        offset: done.start,
                        block: parent.blocks,
                    });
                }
            }
        }
        parent.product *= &block;
        parent.last_block = Some(block);
        parent.blocks += 1;
    }
    Ok(stack.pop().expect("root frame").product)
}

/// Parses then decodes; surfaces `Unbalanced` before any arithmetic.
pub fn decode_str(text: &str, strict: bool, backend: &PrimeBackend) -> Result<BigUint> {
    decode(&DyckWord::parse(text)?, strict, backend)
}

/// Splits `w` into its top-level blocks, one per prime factor.
pub fn split_codewords(w: &DyckWord) -> Vec<DyckWord> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, b) in w.as_str().bytes().enumerate() {
        if b == b'(' {
            if depth == 0 {
                start = i;
            }
            depth += 1;
        } else {
            depth -= 1;
            if depth == 0 {
                out.push(DyckWord(w.as_str()[start..=i].to_owned()));
            }
        }
    }
    out
}

/// True iff no word is a proper prefix of another, checked with a binary
/// trie over the symbols. Repeated words are not prefixes of each other.
pub fn verify_prefix_free<'a, I>(codewords: I) -> bool
where
    I: IntoIterator<Item = &'a DyckWord>,
{
    struct Node {
        next: [u32; 2],
        terminal: bool,
    }
    const NONE: u32 = 0;
    let mut trie = vec![Node {
        next: [NONE; 2],
        terminal: false,
    }];
    for w in codewords {
        let mut at = 0usize;
        for b in w.as_str().bytes() {
            if trie[at].terminal {
                return false;
            }
            let slot = (b == b')') as usize;
            if trie[at].next[slot] == NONE {
                trie.push(Node {
                    next: [NONE; 2],
                    terminal: false,
                });
                trie[at].next[slot] = (trie.len() - 1) as u32;
            }
            at = trie[at].next[slot] as usize;
        }
        if trie[at].next != [NONE; 2] {
            return false;
        }
        trie[at].terminal = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::tau_u64;

    fn backend() -> PrimeBackend {
        PrimeBackend::with_limit(1 << 16).unwrap()
    }

    fn w(s: &str) -> DyckWord {
        DyckWord::parse(s).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn parse_rejects_with_offsets() {
        assert_eq!(
            DyckWord::parse("())(").unwrap_err(),
            Error::Unbalanced {
                offset: 2,
                reason: "')' without matching '('"
            }
        );
        assert!(matches!(
            DyckWord::parse("(()"),
            Err(Error::Unbalanced { offset: 0, .. })
        ));
        assert!(matches!(
            DyckWord::parse("()x"),
            Err(Error::Unbalanced { offset: 2, .. })
        ));
        assert!(matches!(
            DyckWord::parse("() ()"),
            Err(Error::Unbalanced { offset: 2, .. })
        ));
        assert_eq!(DyckWord::parse("()\n").unwrap().as_str(), "()");
        assert_eq!(DyckWord::parse("()\r\n").unwrap().as_str(), "()");
        assert!(DyckWord::parse("").unwrap().is_empty());
    }

    #[test]
    fn tree_to_dyck_examples() {
        let b = backend();
        assert_eq!(tree_to_dyck(&RootedTree::singleton()).as_str(), "");
        assert_eq!(tree_to_dyck(&tau_u64(17, &b).unwrap()).as_str(), "((()()))");
        assert_eq!(tree_to_dyck(&tau_u64(6, &b).unwrap()).as_str(), "()(())");
    }

    #[test]
    fn dyck_to_tree_examples() {
        let b = backend();
        assert_eq!(
            dyck_to_tree(&w(""), true, &b).unwrap(),
            RootedTree::singleton()
        );
        assert_eq!(
            dyck_to_tree(&w("((()()))"), true, &b).unwrap(),
            tau_u64(17, &b).unwrap()
        );
        assert_eq!(
            dyck_to_tree(&w("(())()"), true, &b).unwrap_err(),
            Error::NonCanonical {
                offset: 4,
                block: 1
            }
        );
        let lenient = dyck_to_tree(&w("(())()"), false, &b).unwrap();
        assert_eq!(tree_to_dyck(&lenient).as_str(), "()(())");
    }

    #[test]
    fn nested_noncanonical_block_is_located() {
        let b = backend();
        // Inside the outer block: "(())" (3) before "()" (2).
        let err = dyck_to_tree(&w("((())())"), true, &b).unwrap_err();
        assert_eq!(
            err,
            Error::NonCanonical {
                offset: 5,
                block: 1
            }
        );
        assert_eq!(decode(&w("((())())"), true, &b).unwrap_err(), err);
    }

    #[test]
    fn encode_examples() {
        let b = backend();
        assert_eq!(encode_u64(1, &b).unwrap().as_str(), "");
        assert_eq!(encode_u64(2, &b).unwrap().as_str(), "()");
        assert_eq!(encode_u64(17, &b).unwrap().as_str(), "((()()))");
        assert!(encode(&big(0), &b).is_err());
    }

    #[test]
    fn decode_examples() {
        let b = backend();
        assert_eq!(decode(&w(""), true, &b).unwrap(), big(1));
        assert_eq!(decode(&w("()(())"), true, &b).unwrap(), big(6));
        assert_eq!(decode(&w("((()()))"), true, &b).unwrap(), big(17));
        assert_eq!(decode(&w("(())()"), false, &b).unwrap(), big(6));
        assert!(matches!(
            decode_str(")(", true, &b),
            Err(Error::Unbalanced { offset: 0, .. })
        ));
    }

    #[test]
    fn decode_overflow_is_recoverable() {
        let small = PrimeBackend::new(crate::primes::BackendConfig {
            sieve_limit: 64,
            hard_ceiling: 1 << 12,
        })
        .unwrap();
        let deep = format!("{}{}", "(".repeat(40), ")".repeat(40));
        assert!(matches!(
            decode_str(&deep, true, &small),
            Err(Error::IndexOverflow { .. })
        ));
    }

    #[test]
    fn split_examples() {
        let strs = |v: Vec<DyckWord>| v.into_iter().map(DyckWord::into_string).collect::<Vec<_>>();
        assert_eq!(strs(split_codewords(&w("()(())"))), ["()", "(())"]);
        assert!(split_codewords(&w("")).is_empty());
        assert_eq!(strs(split_codewords(&w("((()()))"))), ["((()()))"]);
    }

    #[test]
    fn prefix_free_examples() {
        let b = backend();
        let primes: Vec<DyckWord> = (2..=100u64)
            .filter(|&n| b.is_prime_u64(n))
            .map(|p| encode_u64(p, &b).unwrap())
            .collect();
        assert!(verify_prefix_free(&primes));
        assert!(!verify_prefix_free(&[w("()"), w("()()")]));
        assert!(!verify_prefix_free(&[w("()()"), w("()")]));
        assert!(verify_prefix_free(&[]));
        assert!(!verify_prefix_free(&[w(""), w("()")]));
        // Codewords of composites are not prefix-free against their factors.
        assert!(!verify_prefix_free(&[
            encode_u64(2, &b).unwrap(),
            encode_u64(6, &b).unwrap()
        ]));
    }
}
