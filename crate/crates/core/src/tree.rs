//! Topological rooted trees and the Matula bijection `tau: N -> trees`.
//!
//! A [`RootedTree`] is stored as a flat arena: node 0 is the root and every
//! child has a larger index than its parent. All walks are therefore plain
//! loops over the arena (forward for preorder work, backward for bottom-up
//! work) and never recurse, so paths of any depth are safe.
//!
//! Trees are unordered. Equality is rooted isomorphism, which coincides with
//! equality of canonical forms. The stored child order only matters for
//! serialization; [`RootedTree::canonicalize`] sorts every child list by
//! ascending Matula number.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::primes::PrimeBackend;

#[derive(Clone)]
pub struct RootedTree {
    children: Vec<Vec<usize>>,
}

impl RootedTree {
    /// The single-node tree, `tau(1)`.
    pub fn singleton() -> Self {
        RootedTree {
            children: vec![Vec::new()],
        }
    }

    /// Builds from an arena. Callers guarantee node 0 is the root and each
    /// non-root node appears in exactly one child list of a smaller index.
    pub(crate) fn from_arena(children: Vec<Vec<usize>>) -> Self {
        debug_assert!(!children.is_empty());
        debug_assert!(children
            .iter()
            .enumerate()
            .all(|(i, cs)| cs.iter().all(|&c| c > i)));
        RootedTree { children }
    }

    /// A root whose subtrees are `subtrees`, in the given order.
    pub fn from_subtrees<I>(subtrees: I) -> Self
    where
        I: IntoIterator<Item = RootedTree>,
    {
        let mut out = RootedTree::singleton();
        for t in subtrees {
            out.attach(&t);
        }
        out
    }

    /// Appends a copy of `sub` as the last child of the root.
    fn attach(&mut self, sub: &RootedTree) {
        let offset = self.children.len();
        self.children[0].push(offset);
        self.children.extend(
            sub.children
                .iter()
                .map(|cs| cs.iter().map(|&c| c + offset).collect()),
        );
    }

    /// Root identification, `t1 ∧ t2`: the root's child list is the
    /// concatenation of both child lists. The result is equal (as a
    /// topological tree) to the canonical merge; call
    /// [`merge_canonical`](Self::merge_canonical) when the stored order
    /// must also be canonical.
    pub fn merge(&self, other: &RootedTree) -> RootedTree {
        let mut out = self.clone();
        // Other's root is dropped; its node i > 0 lands at offset + i - 1.
        let offset = out.children.len();
        let remap = |c: usize| c + offset - 1;
        out.children[0].extend(other.children[0].iter().map(|&c| remap(c)));
        out.children.extend(
            other.children[1..]
                .iter()
                .map(|cs| cs.iter().map(|&c| remap(c)).collect()),
        );
        out
    }

    pub fn merge_canonical(
        &self,
        other: &RootedTree,
        backend: &PrimeBackend,
    ) -> Result<RootedTree> {
        self.merge(other).canonicalize(backend)
    }

    /// Planting, `p(t)`: a new root whose single child is the old root.
    pub fn plant(&self) -> RootedTree {
        let mut children = Vec::with_capacity(self.children.len() + 1);
        children.push(vec![1]);
        children.extend(
            self.children
                .iter()
                .map(|cs| cs.iter().map(|&c| c + 1).collect()),
        );
        RootedTree { children }
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    pub fn edge_count(&self) -> usize {
        self.children.len() - 1
    }

    /// Degree of the root.
    pub fn root_degree(&self) -> usize {
        self.children[0].len()
    }

    /// True iff the root has degree exactly 1.
    pub fn is_planted(&self) -> bool {
        self.root_degree() == 1
    }

    /// Length of the longest root-to-leaf path, in edges.
    pub fn height(&self) -> usize {
        let mut depth = vec![0usize; self.children.len()];
        let mut best = 0;
        for (i, cs) in self.children.iter().enumerate() {
            for &c in cs {
                depth[c] = depth[i] + 1;
                best = best.max(depth[c]);
            }
        }
        best
    }

    /// Copies of the root's subtrees, in stored order.
    pub fn subtrees(&self) -> Vec<RootedTree> {
        self.children[0].iter().map(|&c| self.subtree(c)).collect()
    }

    fn subtree(&self, node: usize) -> RootedTree {
        let mut index = HashMap::new();
        let mut out = Vec::new();
        // Arena order is preserved within the subtree, so parents still
        // precede their children after renumbering.
        let mut members = vec![node];
        let mut i = 0;
        while i < members.len() {
            members.extend(self.children[members[i]].iter().copied());
            i += 1;
        }
        members.sort_unstable();
        for (new, &old) in members.iter().enumerate() {
            index.insert(old, new);
        }
        for &old in &members {
            out.push(self.children[old].iter().map(|c| index[c]).collect());
        }
        RootedTree { children: out }
    }

    pub(crate) fn arena(&self) -> &[Vec<usize>] {
        &self.children
    }

    /// Matula number of every node's subtree, indexed like the arena.
    pub(crate) fn node_numbers(&self, backend: &PrimeBackend) -> Result<Vec<BigUint>> {
        let mut numbers = vec![BigUint::zero(); self.children.len()];
        for i in (0..self.children.len()).rev() {
            let mut acc = BigUint::one();
            for &c in &self.children[i] {
                acc *= backend.nth_prime_big(&numbers[c])?;
            }
            numbers[i] = acc;
        }
        Ok(numbers)
    }

    /// `tau^-1(t)`: the product over root subtrees of `p(tau^-1(subtree))`.
    pub fn matula_number(&self, backend: &PrimeBackend) -> Result<BigUint> {
        let mut numbers = self.node_numbers(backend)?;
        Ok(numbers.swap_remove(0))
    }

    /// Sorts every child list by ascending Matula number. Idempotent.
    pub fn canonicalize(&self, backend: &PrimeBackend) -> Result<RootedTree> {
        let numbers = self.node_numbers(backend)?;
        build_preorder(0usize, |&node| {
            let mut cs = self.children[node].clone();
            cs.sort_by(|a, b| numbers[*a].cmp(&numbers[*b]));
            Ok(cs)
        })
    }

    /// True iff every child list is in nondecreasing Matula order.
    pub fn is_canonical(&self, backend: &PrimeBackend) -> Result<bool> {
        let numbers = self.node_numbers(backend)?;
        Ok(self
            .children
            .iter()
            .all(|cs| cs.windows(2).all(|w| numbers[w[0]] <= numbers[w[1]])))
    }

    /// Interns the shape of every node; isomorphic subtrees get equal ids.
    fn shape_ids(&self, interner: &mut HashMap<Vec<u32>, u32>) -> u32 {
        let mut ids = vec![0u32; self.children.len()];
        for i in (0..self.children.len()).rev() {
            let mut key: Vec<u32> = self.children[i].iter().map(|&c| ids[c]).collect();
            key.sort_unstable();
            let next = interner.len() as u32;
            ids[i] = *interner.entry(key).or_insert(next);
        }
        ids[0]
    }
}

/// Builds a tree top-down from a seed. `expand` yields the children of a
/// seed in the order they should be stored.
fn build_preorder<T>(root: T, mut expand: impl FnMut(&T) -> Result<Vec<T>>) -> Result<RootedTree> {
    let mut children: Vec<Vec<usize>> = Vec::new();
    // (seed, parent node index)
    let mut stack: Vec<(T, Option<usize>)> = vec![(root, None)];
    while let Some((seed, parent)) = stack.pop() {
        let node = children.len();
        children.push(Vec::new());
        if let Some(p) = parent {
            children[p].push(node);
        }
        let kids = expand(&seed)?;
        stack.extend(kids.into_iter().rev().map(|k| (k, Some(node))));
    }
    Ok(RootedTree { children })
}

/// `tau(n)`, in canonical form.
pub fn tau(n: &BigUint, backend: &PrimeBackend) -> Result<RootedTree> {
    if n.is_zero() {
        return Err(Error::Domain("tau is defined for n >= 1".into()));
    }
    build_preorder(n.clone(), |m| {
        backend
            .factorize(m)?
            .iter()
            .map(|f| backend.prime_index(f).map(BigUint::from))
            .collect()
    })
}

pub fn tau_u64(n: u64, backend: &PrimeBackend) -> Result<RootedTree> {
    tau(&BigUint::from(n), backend)
}

impl PartialEq for RootedTree {
    fn eq(&self, other: &Self) -> bool {
        if self.children.len() != other.children.len() {
            return false;
        }
        let mut interner = HashMap::new();
        self.shape_ids(&mut interner) == other.shape_ids(&mut interner)
    }
}

impl Eq for RootedTree {}

impl Default for RootedTree {
    fn default() -> Self {
        RootedTree::singleton()
    }
}

impl fmt::Debug for RootedTree {
    /// Parenthesized form in stored child order; `∘` for the single node.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = crate::codec::parens_of(self);
        if s.is_empty() {
            f.write_str("RootedTree(∘)")
        } else {
            write!(f, "RootedTree({s})")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn backend() -> PrimeBackend {
        PrimeBackend::with_limit(1 << 16).unwrap()
    }

    fn t(n: u64) -> RootedTree {
        tau_u64(n, &backend()).unwrap()
    }

    fn leaf() -> RootedTree {
        RootedTree::singleton()
    }

    #[test]
    fn singleton_examples() {
        let b = backend();
        assert_eq!(leaf().root_degree(), 0);
        assert_eq!(leaf().edge_count(), 0);
        assert_eq!(leaf().matula_number(&b).unwrap(), BigUint::one());
    }

    #[test]
    fn merge_examples() {
        let x = t(30);
        assert_eq!(x.merge(&leaf()), x);
        assert_eq!(leaf().merge(&x), x);
        assert_eq!(t(2).merge(&t(2)), t(4));
        assert_eq!(t(2).merge(&t(3)), t(6));
        assert_eq!(t(3).merge(&t(2)), t(6));
    }

    #[test]
    fn merge_canonical_orders_children() {
        let b = backend();
        let m = t(3).merge_canonical(&t(2), &b).unwrap();
        assert_eq!(crate::codec::parens_of(&m), "()(())");
    }

    #[test]
    fn plant_examples() {
        assert_eq!(leaf().plant(), t(2));
        assert_eq!(t(4).plant(), t(7));
        for n in [1, 2, 6, 17, 100] {
            assert!(t(n).plant().is_planted());
        }
    }

    #[test]
    fn tau_examples() {
        assert_eq!(t(1), leaf());
        let four = t(4);
        assert_eq!(four.root_degree(), 2);
        assert!(four.subtrees().iter().all(|s| *s == leaf()));
        let seventeen = leaf().plant().merge(&leaf().plant()).plant().plant();
        assert_eq!(t(17), seventeen);
        assert!(tau(&BigUint::zero(), &backend()).is_err());
    }

    #[test]
    fn matula_number_examples() {
        let b = backend();
        let path3 = leaf().plant().plant().plant();
        assert_eq!(path3.matula_number(&b).unwrap(), BigUint::from(5u32));
        let star = RootedTree::from_subtrees(vec![leaf(); 3]);
        assert_eq!(star.matula_number(&b).unwrap(), BigUint::from(8u32));
        assert_eq!(
            star,
            leaf().plant().merge(&leaf().plant()).merge(&leaf().plant())
        );
    }

    #[test]
    fn canonicalize_examples() {
        let b = backend();
        assert_eq!(leaf().canonicalize(&b).unwrap().node_count(), 1);
        // Root blocks: tau(3) then tau(2).
        let swapped = t(3).merge(&t(2));
        assert_eq!(crate::codec::parens_of(&swapped), "(())()");
        assert!(!swapped.is_canonical(&b).unwrap());
        let c = swapped.canonicalize(&b).unwrap();
        assert_eq!(crate::codec::parens_of(&c), "()(())");
        let cc = c.canonicalize(&b).unwrap();
        assert_eq!(crate::codec::parens_of(&cc), crate::codec::parens_of(&c));
    }

    #[test]
    fn edge_count_examples() {
        assert_eq!(leaf().edge_count(), 0);
        assert_eq!(t(4).edge_count(), 2);
        assert_eq!(t(17).edge_count(), 4);
    }

    #[test]
    fn is_planted_examples() {
        assert!(!leaf().is_planted());
        assert!(t(2).is_planted());
        assert!(!t(6).is_planted());
    }

    #[test]
    fn deep_paths_do_not_recurse() {
        let n = 200_000;
        let arena: Vec<Vec<usize>> = (0..=n)
            .map(|i| if i < n { vec![i + 1] } else { vec![] })
            .collect();
        let path = RootedTree::from_arena(arena);
        assert_eq!(path.edge_count(), 200_000);
        assert_eq!(path.height(), 200_000);
        let small = PrimeBackend::new(crate::primes::BackendConfig {
            sieve_limit: 1 << 10,
            hard_ceiling: 1 << 20,
        })
        .unwrap();
        assert!(matches!(
            path.matula_number(&small),
            Err(Error::IndexOverflow { .. })
        ));
        let copy = path.clone();
        assert_eq!(path, copy);
        drop(path);
    }

    #[test]
    fn equality_ignores_child_order() {
        let a = RootedTree::from_subtrees(vec![t(5), t(2), t(9)]);
        let b = RootedTree::from_subtrees(vec![t(9), t(5), t(2)]);
        assert_eq!(a, b);
        assert_ne!(a, RootedTree::from_subtrees(vec![t(9), t(5), t(3)]));
    }

    #[test]
    fn subtrees_roundtrip() {
        let x = t(2 * 3 * 17 * 17);
        let rebuilt = RootedTree::from_subtrees(x.subtrees());
        assert_eq!(rebuilt, x);
    }
}
